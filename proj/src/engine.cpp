// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/engine.h"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "cqe/errors.h"
#include "cqe/evaluator.h"
#include "cqe/parser.h"
#include "cqe/rewriter.h"

namespace cqe {

namespace {

// Left fold of the sequence followed by the final query, so the conjunction's
// disjunct order is the sequence order.
BUCQ conjoinAll(const std::vector<BUCQ>& prefix, const BUCQ& last,
                std::size_t maxDisjuncts) {
  if (prefix.empty()) return last;
  BUCQ acc = prefix[0];
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    acc = conjoinBUCQs(acc, prefix[i], maxDisjuncts);
  }
  return conjoinBUCQs(acc, last, maxDisjuncts);
}

void requireMode(const Session& s, SessionMode mode, const char* what) {
  if (s.mode != mode) {
    throw CqeError(std::string(what) + " requires a " +
                   (mode == SessionMode::Exact ? "exact" : "materialized") +
                   "-mode session");
  }
}

}  // namespace

std::string sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw CqeError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

Session openSession(const TBox& tbox, const Policy& policy, const ABox& abox,
                    SessionMode mode, const EngineConfig& config) {
  if (!isConsistent(tbox, abox)) {
    throw InconsistentInstance("the TBox and ABox are inconsistent");
  }
  CQESpec spec{tbox, policy};
  if (!isPolicyConsistentWith(spec, ABox{})) {
    throw InconsistentInstance("the TBox and policy are inconsistent");
  }
  Session s;
  s.instance = CQEInstance{tbox, policy, abox};
  s.config = config;
  if (mode == SessionMode::Materialized) {
    switchToMaterialized(s);
  }
  return s;
}

FOPtr answerSentence(const CQEInstance& instance,
                     const std::vector<BUCQ>& entq, const BUCQ& q,
                     const EngineConfig& config) {
  BUCQ folded = conjoinAll(entq, q, config.maxConjunctionDisjuncts);
  FOPtr brave = braveRef(folded, instance.tbox, instance.policy,
                         config.maxConjunctionDisjuncts);
  return atomRewr(brave, instance.tbox);
}

bool ask(Session& s, const BUCQ& q) {
  requireMode(s, SessionMode::Exact, "ask");
  bool answer =
      evalFO(answerSentence(s.instance, s.entq, q, s.config), s.instance.abox);
  s.history.emplace_back(q, answer);
  if (answer) s.entq.push_back(q);
  return answer;
}

bool askViaPowerset(const CQEInstance& instance, const std::vector<BUCQ>& Q,
                    std::size_t i, const EngineConfig& config) {
  if (i < 1 || i > Q.size()) {
    throw CqeError("query position " + std::to_string(i) +
                   " is outside the sequence of length " +
                   std::to_string(Q.size()));
  }
  if (Q.size() > config.maxPowersetQueries) {
    throw CapacityExceeded("sequence of " + std::to_string(Q.size()) +
                           " queries exceeds the powerset cap of " +
                           std::to_string(config.maxPowersetQueries));
  }
  CQESpec spec = instance.spec();
  std::vector<FOPtr> branches;
  std::size_t guesses = std::size_t{1} << (i - 1);
  for (std::size_t mask = 0; mask < guesses; ++mask) {
    std::set<std::size_t> guess;
    for (std::size_t b = 0; b + 1 < i; ++b) {
      if (mask & (std::size_t{1} << b)) guess.insert(b + 1);
    }
    branches.push_back(
        stateRef(spec, Q, i, guess, config.maxConjunctionDisjuncts));
  }
  FOPtr sentence = atomRewr(foOr(std::move(branches)), instance.tbox);
  return evalFO(sentence, instance.abox);
}

Censor materializeCensor(const Session& s) {
  requireMode(s, SessionMode::Exact, "materializeCensor");
  const CQEInstance& inst = s.instance;
  CQESpec spec = inst.spec();
  ABox cl = closure(inst.tbox, inst.abox);

  std::vector<Atom> chosen;
  std::set<std::string> chosenKeys;
  auto take = [&](const Atom& a) {
    if (chosenKeys.insert(renderAtom(a)).second) chosen.push_back(a);
  };

  if (!s.entq.empty()) {
    BUCQ folded = conjoinAll(
        std::vector<BUCQ>(s.entq.begin(), s.entq.end() - 1), s.entq.back(),
        s.config.maxConjunctionDisjuncts);
    BUCQ reformulated =
        perfectRef(folded, inst.tbox, s.config.maxConjunctionDisjuncts);
    std::vector<BCQ> denials;
    if (std::optional<BUCQ> pq = policyQuery(inst.policy)) {
      BUCQ rewrittenPolicy =
          perfectRef(*pq, inst.tbox, s.config.maxConjunctionDisjuncts);
      denials = rewrittenPolicy.disjuncts;
    }

    bool seeded = false;
    for (const BCQ& qr : reformulated.disjuncts) {
      std::vector<FOPtr> parts;
      for (const Atom& a : qr.atoms()) parts.push_back(foAtom(a));
      std::vector<std::string> qrVars = qr.variableOrder();
      std::set<std::string> reserved(qrVars.begin(), qrVars.end());
      for (const BCQ& qd : denials) {
        parts.push_back(foNot(saturate(qr, renameApart(qd, reserved))));
      }
      // Variables stay free: each satisfying binding names one candidate
      // image of this disjunct inside the closure.
      FOPtr guarded = atomRewr(foAnd(std::move(parts)), inst.tbox);
      std::vector<Binding> bindings =
          evalBindings(guarded, qr.variableOrder(), inst.abox);
      if (bindings.empty()) continue;
      const Binding& sigma = bindings.front();
      for (const Atom& a : qr.atoms()) {
        Atom ground = a;
        for (Term& t : ground.args) {
          if (t.kind == TermKind::Variable) {
            t = constant(sigma.at(t.name));
          }
        }
        take(ground);
      }
      seeded = true;
      break;
    }
    if (!seeded) {
      throw CqeError(
          "no policy-compatible image of the answered queries exists; the "
          "session state is corrupt");
    }
  }

  for (const Atom& gamma : cl.atoms()) {
    if (chosenKeys.count(renderAtom(gamma))) continue;
    std::vector<Atom> candidate = chosen;
    candidate.push_back(gamma);
    if (isPolicyConsistentWith(spec, ABox(std::move(candidate)))) {
      take(gamma);
    }
  }
  return Censor{ABox(std::move(chosen))};
}

bool askMaterialized(Session& s, const BUCQ& q) {
  requireMode(s, SessionMode::Materialized, "askMaterialized");
  FOPtr sentence = toSentence(
      perfectRef(q, s.instance.tbox, s.config.maxConjunctionDisjuncts));
  bool answer = evalFO(sentence, s.materialized->atoms);
  s.history.emplace_back(q, answer);
  return answer;
}

void saveSession(const Session& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CqeError("cannot write session log '" + path + "'");
  }
  out << "#tbox-sha256:" << sha256Hex(renderTBox(s.instance.tbox)) << "\n";
  out << "#policy-sha256:" << sha256Hex(renderPolicy(s.instance.policy))
      << "\n";
  out << "#abox-sha256:" << sha256Hex(renderABox(s.instance.abox)) << "\n";
  for (const auto& [q, answer] : s.history) {
    out << (answer ? "TRUE" : "FALSE") << "\t" << renderBUCQ(q) << "\n";
  }
  if (!out.good()) {
    throw CqeError("failed while writing session log '" + path + "'");
  }
}

Session loadSession(const TBox& tbox, const Policy& policy, const ABox& abox,
                    const std::string& path, const EngineConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SourceError(0, 0, "cannot open session log '" + path + "'");
  }
  std::string line;
  std::size_t lineNo = 0;
  auto header = [&](const std::string& prefix, const std::string& expected) {
    ++lineNo;
    if (!std::getline(in, line)) {
      throw SourceError(lineNo, 1, "session log ends before the '" + prefix +
                                       "' header");
    }
    if (line.rfind(prefix, 0) != 0) {
      throw SourceError(lineNo, 1, "expected a '" + prefix + "' header");
    }
    std::string recorded = line.substr(prefix.size());
    if (recorded != expected) {
      throw HashMismatch("the '" + prefix +
                         "' header does not match the supplied input");
    }
  };
  header("#tbox-sha256:", sha256Hex(renderTBox(tbox)));
  header("#policy-sha256:", sha256Hex(renderPolicy(policy)));
  header("#abox-sha256:", sha256Hex(renderABox(abox)));

  Session s = openSession(tbox, policy, abox, SessionMode::Exact, config);
  while (std::getline(in, line)) {
    ++lineNo;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw SourceError(lineNo, 1, "expected '<TRUE|FALSE>\\t<query>'");
    }
    std::string verdict = line.substr(0, tab);
    bool recorded;
    if (verdict == "TRUE") {
      recorded = true;
    } else if (verdict == "FALSE") {
      recorded = false;
    } else {
      throw SourceError(lineNo, 1, "answer must be TRUE or FALSE, got '" +
                                       verdict + "'");
    }
    BUCQ q = parseBUCQ(line.substr(tab + 1));
    bool replayed = ask(s, q);
    if (replayed != recorded) {
      throw ReplayMismatch("line " + std::to_string(lineNo) + ": recorded " +
                           verdict + " but replay answered " +
                           (replayed ? "TRUE" : "FALSE"));
    }
  }
  return s;
}

void switchToMaterialized(Session& s) {
  if (s.mode == SessionMode::Materialized) return;
  Censor frozen = materializeCensor(s);
  s.materialized = std::move(frozen);
  s.mode = SessionMode::Materialized;
}

}  // namespace cqe
