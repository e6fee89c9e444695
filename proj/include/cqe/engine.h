// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Protection-state sessions over a validated ontology instance. A session
// answers a stream of Boolean queries so that, at every point, some optimal
// censor of the instance is compatible with all answers given so far: a query
// is answered true exactly when every censor still compatible with the past
// entails it. Answers are computed by first-order rewriting (no censor is
// ever materialized on the exact path), in time polynomial in the ABox.
//
// Also here: the powerset-of-guesses cross-check path, greedy censor
// materialization with the approximate materialized mode, and session
// persistence with replay verification.

#ifndef CQE_ENGINE_H
#define CQE_ENGINE_H

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqe/core.h"

namespace cqe {

// Caps that turn exponential blowups into CapacityExceeded errors instead of
// silent truncation.
struct EngineConfig {
  // Maximum number of BCQ disjuncts a conjunction or rewriting may reach.
  std::size_t maxConjunctionDisjuncts = 4096;
  // Maximum query-sequence length for the powerset evaluation path.
  std::size_t maxPowersetQueries = 12;
};

// An ABox that is a subset of the instance's deductive closure and is jointly
// consistent with the TBox and the policy.
struct Censor {
  ABox atoms;
};

enum class SessionMode { Exact, Materialized };

// A protection state: the instance plus everything asked so far. `entq` is
// the subsequence of history answered true; in exact mode it drives the
// rewriting of the next query.
struct Session {
  CQEInstance instance;
  std::vector<std::pair<BUCQ, bool>> history;
  std::vector<BUCQ> entq;
  SessionMode mode = SessionMode::Exact;
  std::optional<Censor> materialized;
  EngineConfig config;
};

// Validates the instance (the TBox and ABox must be consistent; the TBox and
// policy are vacuously consistent and this is checked over the empty ABox)
// and returns an empty-history session. Materialized mode freezes a censor of
// the opening state immediately. Throws InconsistentInstance.
Session openSession(const TBox& tbox, const Policy& policy, const ABox& abox,
                    SessionMode mode = SessionMode::Exact,
                    const EngineConfig& config = EngineConfig{});

// The sentence whose truth over the raw ABox decides the next answer: the
// brave rewriting of (conjunction of entq, then q), atom-rewritten so it can
// be evaluated without computing the closure.
FOPtr answerSentence(const CQEInstance& instance,
                     const std::vector<BUCQ>& entq, const BUCQ& q,
                     const EngineConfig& config = EngineConfig{});

// Exact-mode answer: evaluates answerSentence over the ABox, records the
// query in the history, and appends it to entq when true. True means the
// current state entails the query; false is deliberately silent about whether
// the query failed or was censored. On CapacityExceeded the session is left
// unchanged.
bool ask(Session& s, const BUCQ& q);

// Stateless cross-check of the i-th answer (1-based) for the query sequence:
// disjoins the state rewriting over every guess of which earlier queries were
// answered true, atom-rewrites, and evaluates over the ABox. Throws
// CapacityExceeded when the sequence exceeds the powerset cap.
bool askViaPowerset(const CQEInstance& instance, const std::vector<BUCQ>& Q,
                    std::size_t i, const EngineConfig& config = EngineConfig{});

// Builds an optimal censor of the current exact-mode state that entails every
// entq member: seed with the image of the first satisfying binding of the
// guarded, atom-rewritten entq conjunction (scanning reformulated disjuncts
// in order and bindings in enumeration order), then greedily extend over the
// remaining closure atoms in canonical order.
Censor materializeCensor(const Session& s);

// Materialized-mode answer: plain certain-answer evaluation against the
// frozen censor. Agrees with exact mode until the first false answer; may
// diverge afterwards. History is appended; entq is not used in this mode.
bool askMaterialized(Session& s, const BUCQ& q);

// Persistence: a text log of input hashes plus one answer line per query.
// Loading replays every query through ask and verifies the recorded answers.
// Throws HashMismatch when the inputs differ from the recorded ones and
// ReplayMismatch when a replayed answer disagrees.
void saveSession(const Session& s, const std::string& path);
Session loadSession(const TBox& tbox, const Policy& policy, const ABox& abox,
                    const std::string& path,
                    const EngineConfig& config = EngineConfig{});

// Switches an exact session to materialized mode, freezing a censor of the
// current state.
void switchToMaterialized(Session& s);

// Lowercase hex SHA-256 of a byte string.
std::string sha256Hex(const std::string& data);

}  // namespace cqe

#endif  // CQE_ENGINE_H
