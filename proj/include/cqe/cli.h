// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Command-line surface. Four subcommands share one exit-code contract:
//   0  success (and, for session scripts, a final ask answered TRUE)
//   1  a negative answer: the final scripted ask, or a comparison violation
//   2  usage errors, unreadable or unparsable input
//   3  inconsistent input (TBox/ABox clash, or a session log that fails
//      verification)
//   4  a capacity or enumeration limit was exceeded
// Standard output carries the machine-readable results; diagnostics go to
// standard error.

#ifndef CQE_CLI_H
#define CQE_CLI_H

#include <string>
#include <vector>

namespace cqe {

// Dispatches to one of the subcommands below; `args` excludes the program
// name, so args[0] is the subcommand. Unknown or missing subcommand: exit 2.
int runCli(std::vector<std::string> args);

// `check --tbox F --abox F [--policy F]`: prints `consistent` or
// `inconsistent`; with a policy, also whether the ABox's closure violates it.
int runCheck(const std::vector<std::string>& args);

// `rewrite --tbox F --policy F --query S [--entq F]
//          [--mode brave|state --index i --guess I]`:
// prints the requested rewriting as a first-order sentence.
int runRewrite(const std::vector<std::string>& args);

// `session --tbox F --policy F --abox F [--resume LOG]
//          [--mode exact|materialized] [--script F]`:
// command loop reading `ask <query-body>`, `entq`, `history`, `materialize`,
// `censors`, `save <path>`, `quit`.
int runSession(const std::vector<std::string>& args);

// `compare --tbox F --policy F --abox F --queries F`: prints an answer table
// for five semantics and verifies the expected implications between them.
int runCompare(const std::vector<std::string>& args);

}  // namespace cqe

#endif  // CQE_CLI_H
