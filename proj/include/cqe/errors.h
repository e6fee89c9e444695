// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Exception hierarchy shared by all modules. Every failure mode that can
// cross a module boundary has its own type so callers (and the CLI exit-code
// mapping) can dispatch on it.

#ifndef CQE_ERRORS_H
#define CQE_ERRORS_H

#include <stdexcept>
#include <string>

namespace cqe {

// Base class for all library errors.
class CqeError : public std::runtime_error {
 public:
  explicit CqeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical/syntactic error in an input text, with a 1-based source position.
class SourceError : public CqeError {
 public:
  SourceError(int line, int column, const std::string& msg)
      : CqeError("line " + std::to_string(line) + ", column " +
                 std::to_string(column) + ": " + msg),
        line_(line),
        column_(column),
        message_(msg) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

// A rewriting product or powerset exceeded the configured cap.
class CapacityExceeded : public CqeError {
 public:
  explicit CapacityExceeded(const std::string& msg) : CqeError(msg) {}
};

// The ontology contradicts the ABox; no session can be opened.
class InconsistentInstance : public CqeError {
 public:
  explicit InconsistentInstance(const std::string& msg) : CqeError(msg) {}
};

// A replayed session log produced a different answer than recorded.
class ReplayMismatch : public CqeError {
 public:
  explicit ReplayMismatch(const std::string& msg) : CqeError(msg) {}
};

// A session log was written against different input files.
class HashMismatch : public CqeError {
 public:
  explicit HashMismatch(const std::string& msg) : CqeError(msg) {}
};

// The chase oracle refuses axiom sets whose existential-dependency graph
// has a cycle (the chase might not terminate).
class CyclicTBox : public CqeError {
 public:
  explicit CyclicTBox(const std::string& msg) : CqeError(msg) {}
};

// The chase hit its generation-depth bound before saturating.
class DepthExhausted : public CqeError {
 public:
  explicit DepthExhausted(const std::string& msg) : CqeError(msg) {}
};

// A brute-force oracle input is too large for exhaustive enumeration.
class LimitExceeded : public CqeError {
 public:
  explicit LimitExceeded(const std::string& msg) : CqeError(msg) {}
};

}  // namespace cqe

#endif  // CQE_ERRORS_H
