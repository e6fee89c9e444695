// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/cli.h"

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cqe/core.h"
#include "cqe/engine.h"
#include "cqe/errors.h"
#include "cqe/evaluator.h"
#include "cqe/oracle.h"
#include "cqe/parser.h"
#include "cqe/rewriter.h"

namespace cqe {

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitAnswerFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitCapacity = 4;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SourceError(0, 0, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// One full `ASK ...` query per line; blank lines and `#` comments ignored.
std::vector<BUCQ> parseQueryFile(const std::string& path, Signature* sig) {
  std::vector<BUCQ> out;
  std::istringstream in(readFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(parseBUCQ(t, sig));
  }
  return out;
}

// Maps a library error to the documented exit code, writing the diagnostic
// to the error stream.
int reportError(const CqeError& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (dynamic_cast<const CapacityExceeded*>(&e) != nullptr ||
      dynamic_cast<const LimitExceeded*>(&e) != nullptr) {
    return kExitCapacity;
  }
  if (dynamic_cast<const InconsistentInstance*>(&e) != nullptr ||
      dynamic_cast<const HashMismatch*>(&e) != nullptr ||
      dynamic_cast<const ReplayMismatch*>(&e) != nullptr) {
    return kExitInconsistent;
  }
  return kExitUsage;
}

// CLI11 plumbing shared by the subcommands: parse `args` (given in command
// order) against `app`, returning an exit code to propagate or nullopt to
// proceed.
std::optional<int> parseArgs(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return std::nullopt;
}

struct LoadedSpec {
  TBox tbox;
  Policy policy;
  Signature sig;
};

}  // namespace

int runCheck(const std::vector<std::string>& args) {
  CLI::App app{"Validate a TBox/ABox pair and test the policy"};
  std::string tboxPath, aboxPath, policyPath;
  app.add_option("--tbox", tboxPath, "TBox file")->required();
  app.add_option("--abox", aboxPath, "ABox file")->required();
  app.add_option("--policy", policyPath, "policy file");
  if (std::optional<int> code = parseArgs(app, args)) return *code;

  try {
    Signature sig;
    TBox tbox = parseTBox(readFile(tboxPath), &sig);
    ABox abox = parseABox(readFile(aboxPath), &sig);
    if (!isConsistent(tbox, abox)) {
      std::cout << "inconsistent\n";
      return kExitInconsistent;
    }
    std::cout << "consistent\n";
    if (!policyPath.empty()) {
      Policy policy = parsePolicy(readFile(policyPath), &sig);
      bool violated = false;
      if (std::optional<BUCQ> pq = policyQuery(policy)) {
        violated = evalFO(toSentence(perfectRef(*pq, tbox)), abox);
      }
      std::cout << "policy-violated: " << (violated ? "yes" : "no") << "\n";
    }
    return kExitSuccess;
  } catch (const CqeError& e) {
    return reportError(e);
  }
}

int runRewrite(const std::vector<std::string>& args) {
  CLI::App app{"Print a rewriting as a first-order sentence"};
  std::string tboxPath, policyPath, queryText, entqPath, mode = "brave";
  std::string guessText;
  std::size_t index = 0;
  app.add_option("--tbox", tboxPath, "TBox file")->required();
  app.add_option("--policy", policyPath, "policy file")->required();
  app.add_option("--query", queryText, "query, as a full ASK line")->required();
  app.add_option("--entq", entqPath, "file of queries preceding --query");
  app.add_option("--mode", mode, "brave (default) or state")
      ->check(CLI::IsMember({"brave", "state"}));
  app.add_option("--index", index, "state mode: 1-based position to answer");
  app.add_option("--guess", guessText,
                 "state mode: comma-separated positions assumed true");
  if (std::optional<int> code = parseArgs(app, args)) return *code;

  try {
    Signature sig;
    TBox tbox = parseTBox(readFile(tboxPath), &sig);
    Policy policy = parsePolicy(readFile(policyPath), &sig);
    BUCQ query = parseBUCQ(trim(queryText), &sig);
    std::vector<BUCQ> preceding;
    if (!entqPath.empty()) preceding = parseQueryFile(entqPath, &sig);

    if (mode == "brave") {
      CQEInstance instance{tbox, policy, ABox{}};
      std::cout << renderFO(answerSentence(instance, preceding, query)) << "\n";
      return kExitSuccess;
    }

    // State mode: the sequence is the --entq queries with --query appended.
    std::vector<BUCQ> sequence = preceding;
    sequence.push_back(query);
    if (index < 1 || index > sequence.size()) {
      std::cerr << "error: --index must be between 1 and "
                << sequence.size() << "\n";
      return kExitUsage;
    }
    std::set<std::size_t> guess;
    std::istringstream gin(guessText);
    std::string piece;
    while (std::getline(gin, piece, ',')) {
      piece = trim(piece);
      if (piece.empty()) continue;
      std::size_t pos = 0;
      unsigned long value = 0;
      try {
        value = std::stoul(piece, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != piece.size() || value < 1 || value >= index) {
        std::cerr << "error: --guess entries must be positions before "
                  << index << ", got '" << piece << "'\n";
        return kExitUsage;
      }
      guess.insert(static_cast<std::size_t>(value));
    }
    CQESpec spec{tbox, policy};
    std::cout << renderFO(stateRef(spec, sequence, index, guess)) << "\n";
    return kExitSuccess;
  } catch (const CqeError& e) {
    return reportError(e);
  }
}

namespace {

// One session command; returns false only for `quit`.
bool runSessionCommand(Session& session, Signature& sig,
                       const std::string& line, std::optional<bool>* lastAsk) {
  std::string cmd = line;
  std::string rest;
  std::size_t space = line.find_first_of(" \t");
  if (space != std::string::npos) {
    cmd = line.substr(0, space);
    rest = trim(line.substr(space + 1));
  }

  if (cmd == "quit") return false;

  if (cmd == "ask") {
    BUCQ q = parseBUCQ("ASK " + rest, &sig);
    bool answer = session.mode == SessionMode::Exact ? ask(session, q)
                                                     : askMaterialized(session, q);
    *lastAsk = answer;
    std::cout << (answer ? "TRUE" : "FALSE") << "\n";
  } else if (cmd == "entq") {
    for (const BUCQ& q : session.entq) std::cout << renderBUCQ(q) << "\n";
  } else if (cmd == "history") {
    for (const auto& [q, answer] : session.history) {
      std::cout << (answer ? "TRUE" : "FALSE") << "\t" << renderBUCQ(q) << "\n";
    }
  } else if (cmd == "materialize") {
    const ABox& atoms = session.mode == SessionMode::Materialized
                            ? session.materialized->atoms
                            : materializeCensor(session).atoms;
    for (const Atom& a : atoms.atoms()) std::cout << renderAtom(a) << "\n";
  } else if (cmd == "censors") {
    std::vector<BUCQ> asked;
    for (const auto& [q, answer] : session.history) asked.push_back(q);
    for (const Censor& c : stCens(session.instance, asked)) {
      std::string row = "{";
      bool first = true;
      for (const Atom& a : c.atoms.atoms()) {
        if (!first) row += ", ";
        row += renderAtom(a);
        first = false;
      }
      std::cout << row << "}\n";
    }
  } else if (cmd == "save") {
    if (rest.empty()) {
      std::cerr << "error: save needs a path\n";
    } else {
      saveSession(session, rest);
    }
  } else {
    std::cerr << "error: unknown command '" << cmd << "'\n";
  }
  return true;
}

}  // namespace

int runSession(const std::vector<std::string>& args) {
  CLI::App app{"Interactive or scripted query session"};
  std::string tboxPath, policyPath, aboxPath, resumePath, scriptPath;
  std::string mode = "exact";
  app.add_option("--tbox", tboxPath, "TBox file")->required();
  app.add_option("--policy", policyPath, "policy file")->required();
  app.add_option("--abox", aboxPath, "ABox file")->required();
  app.add_option("--resume", resumePath, "session log to verify and resume");
  app.add_option("--mode", mode, "exact (default) or materialized")
      ->check(CLI::IsMember({"exact", "materialized"}));
  app.add_option("--script", scriptPath, "command file to run instead of stdin");
  if (std::optional<int> code = parseArgs(app, args)) return *code;

  Signature sig;
  Session session;
  try {
    TBox tbox = parseTBox(readFile(tboxPath), &sig);
    Policy policy = parsePolicy(readFile(policyPath), &sig);
    ABox abox = parseABox(readFile(aboxPath), &sig);
    session = resumePath.empty()
                  ? openSession(tbox, policy, abox)
                  : loadSession(tbox, policy, abox, resumePath);
    if (mode == "materialized") switchToMaterialized(session);
  } catch (const CqeError& e) {
    return reportError(e);
  }

  std::ifstream scriptFile;
  std::istream* in = &std::cin;
  if (!scriptPath.empty()) {
    scriptFile.open(scriptPath);
    if (!scriptFile) {
      std::cerr << "error: cannot open '" << scriptPath << "'\n";
      return kExitUsage;
    }
    in = &scriptFile;
  }

  std::optional<bool> lastAsk;
  std::string line;
  while (std::getline(*in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      if (!runSessionCommand(session, sig, t, &lastAsk)) break;
    } catch (const CqeError& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
  }
  if (!scriptPath.empty() && lastAsk.has_value() && !*lastAsk) {
    return kExitAnswerFalse;
  }
  return kExitSuccess;
}

int runCompare(const std::vector<std::string>& args) {
  CLI::App app{"Answer a query sequence under five semantics"};
  std::string tboxPath, policyPath, aboxPath, queriesPath;
  app.add_option("--tbox", tboxPath, "TBox file")->required();
  app.add_option("--policy", policyPath, "policy file")->required();
  app.add_option("--abox", aboxPath, "ABox file")->required();
  app.add_option("--queries", queriesPath, "file of queries, one per line")
      ->required();
  if (std::optional<int> code = parseArgs(app, args)) return *code;

  try {
    Signature sig;
    TBox tbox = parseTBox(readFile(tboxPath), &sig);
    Policy policy = parsePolicy(readFile(policyPath), &sig);
    ABox abox = parseABox(readFile(aboxPath), &sig);
    std::vector<BUCQ> queries = parseQueryFile(queriesPath, &sig);

    Session session = openSession(tbox, policy, abox);
    std::vector<bool> engine;
    for (const BUCQ& q : queries) engine.push_back(ask(session, q));

    const CQEInstance& instance = session.instance;
    std::vector<bool> oracle = dynAnswers(instance, queries);

    std::cout << "# query\tdynCQE(engine)\tdynCQE(oracle)\tskeptical\tIGA\t"
                 "honest\n";
    bool violation = false;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      bool skeptical = skepticalEntails(instance, queries[i]);
      bool iga = igaEntails(instance, queries[i]);
      bool honest = evalFO(toSentence(perfectRef(queries[i], tbox)), abox);
      auto tf = [](bool b) { return b ? "T" : "F"; };
      std::cout << renderBUCQ(queries[i]) << "\t" << tf(engine[i]) << "\t"
                << tf(oracle[i]) << "\t" << tf(skeptical) << "\t" << tf(iga)
                << "\t" << tf(honest) << "\n";
      if (engine[i] != oracle[i]) {
        std::cerr << "violation: engine and oracle disagree at position "
                  << (i + 1) << "\n";
        violation = true;
      }
      if (iga && !skeptical) {
        std::cerr << "violation: IGA answers true without skeptical at "
                     "position " << (i + 1) << "\n";
        violation = true;
      }
      if (skeptical && !engine[i]) {
        std::cerr << "violation: skeptical answers true without the engine "
                     "at position " << (i + 1) << "\n";
        violation = true;
      }
    }
    return violation ? kExitAnswerFalse : kExitSuccess;
  } catch (const CqeError& e) {
    return reportError(e);
  }
}

int runCli(std::vector<std::string> args) {
  if (args.empty()) {
    std::cerr << "usage: cqe <check|rewrite|session|compare> [options]\n"
                 "       cqe <subcommand> --help\n";
    return kExitUsage;
  }
  std::string sub = args[0];
  std::vector<std::string> rest(args.begin() + 1, args.end());
  if (sub == "check") return runCheck(rest);
  if (sub == "rewrite") return runRewrite(rest);
  if (sub == "session") return runSession(rest);
  if (sub == "compare") return runCompare(rest);
  std::cerr << "error: unknown subcommand '" << sub
            << "' (expected check, rewrite, session, or compare)\n";
  return kExitUsage;
}

}  // namespace cqe
