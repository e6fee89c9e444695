// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Finite model checking of first-order sentences over ABoxes under
// active-domain semantics: quantifiers range over the constants of the ABox
// plus the constants of the sentence itself, atoms are true exactly when
// present in the ABox, and equality is identity of constants. On top of the
// checker: satisfying-binding enumeration, deductive closure of an ABox under
// a TBox, minimal-image enumeration for queries, and the consistency checks
// used throughout the engine.

#ifndef CQE_EVALUATOR_H
#define CQE_EVALUATOR_H

#include <map>
#include <string>
#include <vector>

#include "cqe/core.h"

namespace cqe {

// A satisfying assignment of constants to the designated free variables.
using Binding = std::map<std::string, std::string>;

// Truth of a closed sentence over the ABox. Empty active domain makes every
// existential quantifier false.
bool evalFO(const FOPtr& phi, const ABox& abox);

// All bindings of `freeVars` (which must be exactly the free variables of
// psi) that make psi true, sorted lexicographically by the constants assigned
// in freeVars order. Deterministic and duplicate-free.
std::vector<Binding> evalBindings(const FOPtr& psi,
                                  const std::vector<std::string>& freeVars,
                                  const ABox& abox);

// The deductive closure: every ground atom over the signature's predicates
// and the ABox's constants that is entailed by the TBox together with the
// ABox. Contains the ABox itself. Throws InconsistentInstance when the input
// is inconsistent.
ABox closure(const TBox& tbox, const ABox& abox);

// All subset-minimal sub-ABoxes satisfying q, deduplicated, ordered by size
// and then lexicographically by their rendered atoms.
std::vector<ABox> findImages(const BUCQ& q, const ABox& abox);

// Whether the TBox and ABox are jointly consistent: no negative inclusion is
// violated, checked by rewriting the violation query and evaluating it.
bool isConsistent(const TBox& tbox, const ABox& abox);

// Whether the spec's TBox, policy, and the candidate censor are jointly
// consistent: the rewritten policy query must be false over the censor. The
// censor is expected to be a subset of the closure of a consistent instance.
bool isPolicyConsistentWith(const CQESpec& spec, const ABox& censor);

}  // namespace cqe

#endif  // CQE_EVALUATOR_H
