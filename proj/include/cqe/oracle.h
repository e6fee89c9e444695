// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Brute-force ground truth at small scale, used to verify the rewriting
// engine: chase-based entailment, exhaustive censor enumeration over subsets
// of the deductive closure, the inductive surviving-censor set for a query
// sequence, the alternative static semantics (skeptical and
// intersection-of-censors), and the cooperativity check that characterizes
// the surviving censors. Everything here enumerates; nothing here rewrites
// away the exponential; that is the engine's job.

#ifndef CQE_ORACLE_H
#define CQE_ORACLE_H

#include <cstddef>
#include <vector>

#include "cqe/core.h"
#include "cqe/engine.h"

namespace cqe {

// Enumeration guards: the oracle refuses (LimitExceeded) rather than degrade.
struct OracleLimits {
  std::size_t maxClosureAtoms = 18;  // subsets of the closure are enumerated
  std::size_t chaseDepth = 6;        // labeled-null generation bound
};

// Outcome of a bounded chase: whether a query homomorphism was found and
// whether the chase reached a fixpoint within the depth bound. `entailed` is
// trustworthy when true (homomorphisms are sound) or when `saturated`.
struct ChaseOutcome {
  bool entailed = false;
  bool saturated = false;
};

// Builds the restricted chase of the ABox under the TBox's positive
// inclusions, with fresh labeled nulls up to the generation depth, and
// searches for a homomorphism from some disjunct of q. Throws CyclicTBox when
// the existential-dependency graph (left-hand side name of each
// existential-producing inclusion, pointing to the produced role) has a
// cycle.
ChaseOutcome chaseOutcome(const TBox& tbox, const ABox& abox, const BUCQ& q,
                          std::size_t depth);

// As chaseOutcome, but throws DepthExhausted when the bound was hit before
// saturation and no homomorphism was found (the answer would be unreliable).
bool chaseEntails(const TBox& tbox, const ABox& abox, const BUCQ& q,
                  std::size_t depth = OracleLimits{}.chaseDepth);

// All subset-maximal censors: subsets of the closure consistent with the
// TBox and policy such that no strict superset is. Deterministic order (by
// bitmask over the closure's canonical atom order). Throws LimitExceeded when
// the closure exceeds the enumeration limit.
std::vector<Censor> optCens(const CQEInstance& instance,
                            const OracleLimits& limits = OracleLimits{});

// The optimal censors that, together with the TBox, entail q.
std::vector<Censor> optCensEntailing(const CQEInstance& instance,
                                     const BUCQ& q,
                                     const OracleLimits& limits = OracleLimits{});

// The censors surviving the query sequence: start from all optimal censors;
// for each query keep those entailing it, unless none would survive, in which
// case the pool is unchanged.
std::vector<Censor> stCens(const CQEInstance& instance,
                           const std::vector<BUCQ>& queries,
                           const OracleLimits& limits = OracleLimits{});

// The queries of the sequence entailed by every surviving censor (equivalently
// by some, once the induction has run), in first-occurrence order.
std::vector<BUCQ> entQ(const CQEInstance& instance,
                       const std::vector<BUCQ>& queries,
                       const OracleLimits& limits = OracleLimits{});

// The answer to each query of the sequence at its own position: true when the
// pool of censors surviving the queries before it (as in stCens) has a
// nonempty subset entailing it. One enumeration serves the whole sequence.
std::vector<bool> dynAnswers(const CQEInstance& instance,
                             const std::vector<BUCQ>& queries,
                             const OracleLimits& limits = OracleLimits{});

// True when every optimal censor, together with the TBox, entails q.
bool skepticalEntails(const CQEInstance& instance, const BUCQ& q,
                      const OracleLimits& limits = OracleLimits{});

// True when the intersection of all optimal censors, together with the TBox,
// entails q.
bool igaEntails(const CQEInstance& instance, const BUCQ& q,
                const OracleLimits& limits = OracleLimits{});

// A censor is maximally cooperative when no rival censor agrees with it on a
// prefix of the sequence's answers and then answers true where it answers
// false. The definition quantifies rivals over all censors; the optimal-only
// restriction is also reported for comparison.
struct CooperativityReport {
  bool overAllCensors = false;
  bool overOptimalOnly = false;
};

CooperativityReport cooperativityReport(const CQEInstance& instance,
                                        const std::vector<BUCQ>& queries,
                                        const Censor& censor,
                                        const OracleLimits& limits = OracleLimits{});

// The literal definition: rivals range over all censors.
bool isMaximallyCooperative(const CQEInstance& instance,
                            const std::vector<BUCQ>& queries,
                            const Censor& censor,
                            const OracleLimits& limits = OracleLimits{});

}  // namespace cqe

#endif  // CQE_ORACLE_H
