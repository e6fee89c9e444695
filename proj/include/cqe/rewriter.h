// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Query reformulation over DL-Lite_R TBoxes:
//   - perfectRef: compiles positive inclusions into a union of conjunctive
//     queries so that plain evaluation over the ABox decides entailment.
//   - policyQuery / unsatQuery: the denial policy and the negative-inclusion
//     violations, each as a Boolean UCQ.
//   - enumerateMappings / saturate: atom mappings between two conjunctive
//     queries with their most general unifiers, and the equality formula
//     describing which instantiations of a query carry an image of a denial.
//   - braveRef: the rewriting whose models (over the deductive closure of the
//     ABox) are exactly the instances where some optimal censor agrees to
//     answer true.
//   - stateRef: braveRef conditioned on a guess of which past queries were
//     answered true.
//   - atomRewr: per-atom rewriting that turns a sentence meant for the
//     deductive closure into one that evaluates identically over the raw ABox.
//
// All functions are pure and deterministic; identical inputs produce
// byte-identical renderings of the results.

#ifndef CQE_REWRITER_H
#define CQE_REWRITER_H

#include <cstddef>
#include <optional>
#include <vector>

#include "cqe/core.h"

namespace cqe {

// Upper bound on the number of BCQ disjuncts a rewriting or conjunction may
// produce before CapacityExceeded is thrown.
inline constexpr std::size_t kDefaultDisjunctCap = 4096;

// A mapping of every atom of a source query qd into an atom of a target query
// qr, together with the simultaneous most general unifier.
struct Mapping {
  // h[i] is the index in qr.atoms() that atom i of qd maps to.
  std::vector<std::size_t> h;
  // The MGU over the variables of both queries. Values are qr variables or
  // constants; qd variables never appear as values.
  Subst sigma;
  // sigma limited to the variables of qr (identity entries dropped).
  Subst sigmaRestricted;
};

// All reformulations of q obtainable by applying positive inclusions
// right-to-left plus pairwise atom unification, breadth-first, with q's own
// disjuncts first and duplicates (up to canonical form) dropped. For every
// ABox A consistent with T, the result evaluates to true over A exactly when
// T together with A entails q. Throws CapacityExceeded past maxDisjuncts.
BUCQ perfectRef(const BUCQ& q, const TBox& tbox,
                std::size_t maxDisjuncts = kDefaultDisjunctCap);

// The disjunction of the policy's denial bodies, in policy order; an empty
// policy has no query and yields nullopt.
std::optional<BUCQ> policyQuery(const Policy& policy);

// One BCQ per negative inclusion asserting joint membership in both sides;
// satisfied exactly by the ABoxes that contradict the TBox. nullopt when the
// TBox has no negative inclusions.
std::optional<BUCQ> unsatQuery(const TBox& tbox);

// All total functions from the atoms of qd to the atoms of qr (matching
// predicate and arity) for which a simultaneous most general unifier exists.
// The inputs must not share variable names. The unifier eliminates qd
// variables in favour of qr terms; when two qr variables meet, the one
// occurring later in qr maps to the earlier one; a clash of distinct
// constants discards the candidate. Enumeration order is lexicographic over
// the vector of per-atom choices.
std::vector<Mapping> enumerateMappings(const BCQ& qd, const BCQ& qr);

// The disjunction, over all mappings of qd into qr, of the conjunction of
// equalities induced by the unifier on qr's variables. FALSE when no mapping
// exists; a mapping with no induced equalities contributes TRUE. Free
// variables of the result are among the variables of qr. Inputs must not
// share variable names.
FOPtr saturate(const BCQ& qr, const BCQ& qd);

// The sentence that is true over the deductive closure of an ABox exactly
// when some optimal censor of the instance, together with the TBox, entails
// q: each reformulated disjunct of q is kept only on instantiations that do
// not carry an image of any reformulated denial.
FOPtr braveRef(const BUCQ& q, const TBox& tbox, const Policy& policy,
               std::size_t maxDisjuncts = kDefaultDisjunctCap);

// braveRef conditioned on a guess: of the first i queries of Q (1-based),
// those with index in guess are assumed to have been answered true and the
// rest false. The result conjoins, for each j < i outside the guess, the
// negation of braveRef over (the guessed-true prefix before j) ∧ q_j, and
// finally braveRef over (the guessed-true queries) ∧ q_i.
FOPtr stateRef(const CQESpec& spec, const std::vector<BUCQ>& queries,
               std::size_t i, const std::set<std::size_t>& guess,
               std::size_t maxDisjuncts = kDefaultDisjunctCap);

// Replaces every predicate atom of phi (equalities are untouched) by the
// disjunction of its atomic rewritings under the TBox's positive-inclusion
// reachability: a sentence built for the deductive closure of an ABox then
// evaluates identically over the ABox itself.
FOPtr atomRewr(const FOPtr& phi, const TBox& tbox);

}  // namespace cqe

#endif  // CQE_REWRITER_H
