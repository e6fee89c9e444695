// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/oracle.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "cqe/errors.h"
#include "cqe/evaluator.h"
#include "cqe/rewriter.h"

namespace cqe {

namespace {

// ---------------------------------------------------------------------------
// Chase
// ---------------------------------------------------------------------------

// Throws when the existential-dependency graph has a cycle: one edge per
// inclusion producing an existential, from the name on its left side to the
// produced role. Acyclicity of this graph is the documented precondition; it
// does not catch every non-terminating chase, so the depth bound backstops.
void requireAcyclic(const TBox& tbox) {
  std::map<std::string, std::vector<std::string>> edges;
  std::set<std::string> nodes;
  for (const TBoxAxiom& ax : tbox.positiveInclusions()) {
    if (ax.rhs.kind != BasicKind::ExistsRole &&
        ax.rhs.kind != BasicKind::ExistsInverseRole) {
      continue;
    }
    edges[ax.lhs.name].push_back(ax.rhs.name);
    nodes.insert(ax.lhs.name);
    nodes.insert(ax.rhs.name);
  }
  // Iterative DFS with colors: 0 unseen, 1 on stack, 2 done.
  std::map<std::string, int> color;
  for (const std::string& start : nodes) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      std::vector<std::string>& out = edges[node];
      if (next < out.size()) {
        const std::string& succ = out[next++];
        if (color[succ] == 1) {
          throw CyclicTBox("existential dependency cycle through role '" +
                           succ + "'");
        }
        if (color[succ] == 0) {
          color[succ] = 1;
          stack.emplace_back(succ, 0);
        }
      } else {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }
}

struct ChaseState {
  std::vector<Atom> atoms;
  std::set<std::string> keys;                  // rendered atoms, for dedup
  std::map<std::string, std::size_t> termGen;  // labeled-null generations
  std::size_t nextNull = 0;

  bool add(Atom a) {
    std::string key = renderAtom(a);
    if (!keys.insert(key).second) return false;
    atoms.push_back(std::move(a));
    return true;
  }

  std::size_t genOf(const std::string& term) const {
    auto it = termGen.find(term);
    return it == termGen.end() ? 0 : it->second;
  }

  Term freshNull(std::size_t gen) {
    std::string name = "~n" + std::to_string(++nextNull);
    termGen[name] = gen;
    return constant(name);
  }

  bool hasRoleFrom(const std::string& role, const std::string& subject,
                   bool subjectFirst) const {
    for (const Atom& a : atoms) {
      if (a.pred != role || a.args.size() != 2) continue;
      if (subjectFirst ? a.args[0].name == subject : a.args[1].name == subject) {
        return true;
      }
    }
    return false;
  }
};

// The subjects an axiom's left side selects from one atom: for concept-shaped
// sides a single distinguished term, for role-shaped sides the ordered pair.
std::optional<std::vector<Term>> lhsMatch(const BasicConceptOrRole& lhs,
                                          const Atom& a) {
  switch (lhs.kind) {
    case BasicKind::AtomicConcept:
      if (a.pred == lhs.name && a.args.size() == 1) return {{a.args[0]}};
      return std::nullopt;
    case BasicKind::ExistsRole:
      if (a.pred == lhs.name && a.args.size() == 2) return {{a.args[0]}};
      return std::nullopt;
    case BasicKind::ExistsInverseRole:
      if (a.pred == lhs.name && a.args.size() == 2) return {{a.args[1]}};
      return std::nullopt;
    case BasicKind::Role:
      if (a.pred == lhs.name && a.args.size() == 2) {
        return {{a.args[0], a.args[1]}};
      }
      return std::nullopt;
    case BasicKind::InverseRole:
      if (a.pred == lhs.name && a.args.size() == 2) {
        return {{a.args[1], a.args[0]}};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

// Fires one trigger if its conclusion is not already witnessed. Returns true
// when an atom was added; sets `blocked` instead of creating a null deeper
// than `depth`.
bool fireTrigger(ChaseState& st, const TBoxAxiom& ax,
                 const std::vector<Term>& match, std::size_t depth,
                 bool* blocked) {
  const BasicConceptOrRole& rhs = ax.rhs;
  const Term& s = match[0];
  switch (rhs.kind) {
    case BasicKind::AtomicConcept:
      return st.add(Atom{rhs.name, {s}});
    case BasicKind::Role:
      return st.add(Atom{rhs.name, {match[0], match[1]}});
    case BasicKind::InverseRole:
      return st.add(Atom{rhs.name, {match[1], match[0]}});
    case BasicKind::ExistsRole:
    case BasicKind::ExistsInverseRole: {
      bool subjectFirst = rhs.kind == BasicKind::ExistsRole;
      if (st.hasRoleFrom(rhs.name, s.name, subjectFirst)) return false;
      std::size_t gen = st.genOf(s.name) + 1;
      if (gen > depth) {
        if (blocked) *blocked = true;
        return false;
      }
      Term null = st.freshNull(gen);
      if (subjectFirst) return st.add(Atom{rhs.name, {s, null}});
      return st.add(Atom{rhs.name, {null, s}});
    }
  }
  return false;
}

// Homomorphism from some disjunct of q into the chase atoms.
bool hasHomomorphism(const BUCQ& q, const std::vector<Atom>& facts) {
  std::map<std::string, std::vector<std::size_t>> byPred;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    byPred[facts[i].pred].push_back(i);
  }
  for (const BCQ& d : q.disjuncts) {
    const std::vector<Atom>& pattern = d.atoms();
    std::map<std::string, std::string> env;
    std::function<bool(std::size_t)> place = [&](std::size_t k) -> bool {
      if (k == pattern.size()) return true;
      const Atom& p = pattern[k];
      auto it = byPred.find(p.pred);
      if (it == byPred.end()) return false;
      for (std::size_t row : it->second) {
        const Atom& fact = facts[row];
        if (fact.args.size() != p.args.size()) continue;
        std::vector<std::string> bound;
        bool ok = true;
        for (std::size_t j = 0; j < p.args.size() && ok; ++j) {
          const Term& t = p.args[j];
          const std::string& v = fact.args[j].name;
          if (t.kind == TermKind::Constant) {
            ok = t.name == v;
          } else {
            auto e = env.find(t.name);
            if (e != env.end()) {
              ok = e->second == v;
            } else {
              env.emplace(t.name, v);
              bound.push_back(t.name);
            }
          }
        }
        if (ok && place(k + 1)) return true;
        for (const std::string& b : bound) env.erase(b);
      }
      return false;
    };
    if (place(0)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Subset enumeration
// ---------------------------------------------------------------------------

using Mask = std::uint32_t;

// The closure with a consistency verdict for each of its subsets, computed
// definitionally: the rewritten policy query is evaluated over every subset.
struct Enumeration {
  ABox cl;
  std::size_t n = 0;
  std::vector<char> consistent;  // indexed by subset bitmask
};

std::vector<Atom> subsetAtoms(const ABox& cl, Mask mask) {
  std::vector<Atom> atoms;
  for (std::size_t b = 0; b < cl.size(); ++b) {
    if (mask & (Mask{1} << b)) atoms.push_back(cl.atoms()[b]);
  }
  return atoms;
}

Enumeration buildEnumeration(const CQEInstance& instance,
                             const OracleLimits& limits) {
  Enumeration e;
  e.cl = closure(instance.tbox, instance.abox);
  e.n = e.cl.size();
  if (e.n > limits.maxClosureAtoms || e.n > 30) {
    throw LimitExceeded("closure has " + std::to_string(e.n) +
                        " atoms, beyond the enumeration limit of " +
                        std::to_string(std::min<std::size_t>(
                            limits.maxClosureAtoms, 30)));
  }
  std::optional<FOPtr> policySentence;
  if (std::optional<BUCQ> pq = policyQuery(instance.policy)) {
    policySentence = toSentence(perfectRef(*pq, instance.tbox));
  }
  Mask total = Mask{1} << e.n;
  e.consistent.assign(total, 1);
  if (policySentence) {
    for (Mask m = 0; m < total; ++m) {
      e.consistent[m] = !evalFO(*policySentence, ABox(subsetAtoms(e.cl, m)));
    }
  }
  return e;
}

// Maximal consistent subsets: consistent, and no single-atom extension is
// (supersets of inconsistent subsets stay inconsistent, so this is exactly
// subset-maximality). Ascending bitmask order.
std::vector<Mask> maximalMasks(const Enumeration& e) {
  std::vector<Mask> out;
  Mask total = Mask{1} << e.n;
  for (Mask m = 0; m < total; ++m) {
    if (!e.consistent[m]) continue;
    bool extendable = false;
    for (std::size_t b = 0; b < e.n && !extendable; ++b) {
      Mask bit = Mask{1} << b;
      if (!(m & bit) && e.consistent[m | bit]) extendable = true;
    }
    if (!extendable) out.push_back(m);
  }
  return out;
}

std::vector<Censor> masksToCensors(const Enumeration& e,
                                   const std::vector<Mask>& masks) {
  std::vector<Censor> out;
  out.reserve(masks.size());
  for (Mask m : masks) out.push_back(Censor{ABox(subsetAtoms(e.cl, m))});
  return out;
}

FOPtr entailmentSentence(const CQEInstance& instance, const BUCQ& q) {
  return toSentence(perfectRef(q, instance.tbox));
}

// Minimal satisfying subsets of the closure, as bitmasks; a subset entails
// the query exactly when it contains one of them.
std::vector<Mask> imageMasks(const BUCQ& rewritten, const ABox& cl) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    index[renderAtom(cl.atoms()[i])] = i;
  }
  std::vector<Mask> masks;
  for (const ABox& image : findImages(rewritten, cl)) {
    Mask m = 0;
    for (const Atom& a : image.atoms()) m |= Mask{1} << index.at(renderAtom(a));
    masks.push_back(m);
  }
  return masks;
}

bool maskEntails(const std::vector<Mask>& images, Mask subset) {
  for (Mask img : images) {
    if ((img & subset) == img) return true;
  }
  return false;
}

}  // namespace

ChaseOutcome chaseOutcome(const TBox& tbox, const ABox& abox, const BUCQ& q,
                          std::size_t depth) {
  requireAcyclic(tbox);
  ChaseState st;
  for (const Atom& a : abox.atoms()) st.add(a);
  std::vector<TBoxAxiom> pis = tbox.positiveInclusions();

  bool changed = true;
  while (changed) {
    changed = false;
    for (const TBoxAxiom& ax : pis) {
      // Snapshot: atoms added during the scan are handled by the next pass.
      std::size_t count = st.atoms.size();
      for (std::size_t i = 0; i < count; ++i) {
        std::optional<std::vector<Term>> match = lhsMatch(ax.lhs, st.atoms[i]);
        if (!match) continue;
        if (fireTrigger(st, ax, *match, depth, nullptr)) changed = true;
      }
    }
  }
  // Fixpoint reached; anything still unsatisfied was depth-blocked.
  bool blocked = false;
  for (const TBoxAxiom& ax : pis) {
    for (std::size_t i = 0; i < st.atoms.size() && !blocked; ++i) {
      std::optional<std::vector<Term>> match = lhsMatch(ax.lhs, st.atoms[i]);
      if (!match) continue;
      fireTrigger(st, ax, *match, depth, &blocked);
    }
  }

  ChaseOutcome out;
  out.saturated = !blocked;
  out.entailed = hasHomomorphism(q, st.atoms);
  return out;
}

bool chaseEntails(const TBox& tbox, const ABox& abox, const BUCQ& q,
                  std::size_t depth) {
  ChaseOutcome out = chaseOutcome(tbox, abox, q, depth);
  if (out.entailed) return true;
  if (!out.saturated) {
    throw DepthExhausted("chase hit the depth bound of " +
                         std::to_string(depth) + " before saturating");
  }
  return false;
}

std::vector<Censor> optCens(const CQEInstance& instance,
                            const OracleLimits& limits) {
  Enumeration e = buildEnumeration(instance, limits);
  return masksToCensors(e, maximalMasks(e));
}

std::vector<Censor> optCensEntailing(const CQEInstance& instance,
                                     const BUCQ& q,
                                     const OracleLimits& limits) {
  FOPtr sent = entailmentSentence(instance, q);
  std::vector<Censor> out;
  for (Censor& c : optCens(instance, limits)) {
    if (evalFO(sent, c.atoms)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<Censor> stCens(const CQEInstance& instance,
                           const std::vector<BUCQ>& queries,
                           const OracleLimits& limits) {
  std::vector<Censor> pool = optCens(instance, limits);
  for (const BUCQ& q : queries) {
    FOPtr sent = entailmentSentence(instance, q);
    std::vector<Censor> surviving;
    for (const Censor& c : pool) {
      if (evalFO(sent, c.atoms)) surviving.push_back(c);
    }
    if (!surviving.empty()) pool = std::move(surviving);
  }
  return pool;
}

std::vector<BUCQ> entQ(const CQEInstance& instance,
                       const std::vector<BUCQ>& queries,
                       const OracleLimits& limits) {
  std::vector<Censor> pool = stCens(instance, queries, limits);
  std::vector<BUCQ> out;
  for (const BUCQ& q : queries) {
    if (std::find(out.begin(), out.end(), q) != out.end()) continue;
    FOPtr sent = entailmentSentence(instance, q);
    bool all = true;
    for (const Censor& c : pool) {
      if (!evalFO(sent, c.atoms)) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(q);
  }
  return out;
}

std::vector<bool> dynAnswers(const CQEInstance& instance,
                             const std::vector<BUCQ>& queries,
                             const OracleLimits& limits) {
  std::vector<Censor> pool = optCens(instance, limits);
  std::vector<bool> answers;
  for (const BUCQ& q : queries) {
    FOPtr sent = entailmentSentence(instance, q);
    std::vector<Censor> surviving;
    for (const Censor& c : pool) {
      if (evalFO(sent, c.atoms)) surviving.push_back(c);
    }
    answers.push_back(!surviving.empty());
    if (!surviving.empty()) pool = std::move(surviving);
  }
  return answers;
}

bool skepticalEntails(const CQEInstance& instance, const BUCQ& q,
                      const OracleLimits& limits) {
  FOPtr sent = entailmentSentence(instance, q);
  for (const Censor& c : optCens(instance, limits)) {
    if (!evalFO(sent, c.atoms)) return false;
  }
  return true;
}

bool igaEntails(const CQEInstance& instance, const BUCQ& q,
                const OracleLimits& limits) {
  std::vector<Censor> censors = optCens(instance, limits);
  std::vector<Atom> common;
  if (!censors.empty()) {
    common = censors[0].atoms.atoms();
    for (std::size_t i = 1; i < censors.size(); ++i) {
      const std::vector<Atom>& other = censors[i].atoms.atoms();
      std::vector<Atom> kept;
      std::set_intersection(common.begin(), common.end(), other.begin(),
                            other.end(), std::back_inserter(kept));
      common = std::move(kept);
    }
  }
  return evalFO(entailmentSentence(instance, q), ABox(std::move(common)));
}

CooperativityReport cooperativityReport(const CQEInstance& instance,
                                        const std::vector<BUCQ>& queries,
                                        const Censor& censor,
                                        const OracleLimits& limits) {
  Enumeration e = buildEnumeration(instance, limits);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < e.cl.size(); ++i) {
    index[renderAtom(e.cl.atoms()[i])] = i;
  }
  Mask cMask = 0;
  for (const Atom& a : censor.atoms.atoms()) {
    auto it = index.find(renderAtom(a));
    if (it == index.end()) {
      throw CqeError("candidate censor contains " + renderAtom(a) +
                     ", which is outside the closure");
    }
    cMask |= Mask{1} << it->second;
  }
  if (!e.consistent[cMask]) {
    throw CqeError("candidate censor is not consistent with the policy");
  }

  // Entailment of each query by a subset, via its minimal images in the
  // closure (a subset entails the query iff it contains one of them).
  std::vector<std::vector<Mask>> images;
  for (const BUCQ& q : queries) {
    images.push_back(imageMasks(perfectRef(q, instance.tbox), e.cl));
  }
  auto answers = [&](Mask m, std::size_t j) { return maskEntails(images[j], m); };

  // A rival is more cooperative when, at the first query where the answers
  // differ, the rival answers true.
  auto moreCooperative = [&](Mask rival) {
    for (std::size_t j = 0; j < queries.size(); ++j) {
      bool r = answers(rival, j);
      bool c = answers(cMask, j);
      if (r != c) return r;
    }
    return false;
  };

  CooperativityReport report;
  report.overAllCensors = true;
  Mask total = Mask{1} << e.n;
  for (Mask m = 0; m < total; ++m) {
    if (!e.consistent[m]) continue;
    if (moreCooperative(m)) {
      report.overAllCensors = false;
      break;
    }
  }
  report.overOptimalOnly = true;
  for (Mask m : maximalMasks(e)) {
    if (moreCooperative(m)) {
      report.overOptimalOnly = false;
      break;
    }
  }
  return report;
}

bool isMaximallyCooperative(const CQEInstance& instance,
                            const std::vector<BUCQ>& queries,
                            const Censor& censor, const OracleLimits& limits) {
  return cooperativityReport(instance, queries, censor, limits).overAllCensors;
}

}  // namespace cqe
