// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Seeded random generators for property tests: small instances (TBox, policy,
// ABox, query sequence) inside a fixed envelope, instances filtered to the
// oracle's enumeration limits, chase-friendly positive-only instances, and
// random closed first-order sentences over the same signature. Deterministic
// for a fixed seed.

#ifndef CQE_TESTS_GEN_H
#define CQE_TESTS_GEN_H

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqe/core.h"
#include "cqe/evaluator.h"
#include "cqe/oracle.h"

namespace cqe::test {

struct GenLimits {
  std::size_t concepts = 3;
  std::size_t roles = 2;
  std::size_t constants = 4;
  std::size_t aboxAtoms = 6;
  std::size_t tboxAxioms = 4;
  std::size_t denials = 2;
  std::size_t queries = 4;
  std::size_t disjuncts = 2;
  std::size_t atomsPerBCQ = 3;
};

struct RandomInstance {
  TBox tbox;
  Policy policy;
  ABox abox;
  std::vector<BUCQ> queries;

  CQEInstance instance() const { return CQEInstance{tbox, policy, abox}; }
};

class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  bool coin(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }

  std::string conceptName(const GenLimits& lim) {
    return "A" + std::to_string(pick(lim.concepts) + 1);
  }

  std::string roleName(const GenLimits& lim) {
    return "r" + std::to_string(pick(lim.roles) + 1);
  }

  std::string constName(const GenLimits& lim) {
    return "c" + std::to_string(pick(lim.constants) + 1);
  }

  BasicConceptOrRole conceptSide(const GenLimits& lim) {
    switch (pick(3)) {
      case 0:
        return {BasicKind::AtomicConcept, conceptName(lim)};
      case 1:
        return {BasicKind::ExistsRole, roleName(lim)};
      default:
        return {BasicKind::ExistsInverseRole, roleName(lim)};
    }
  }

  BasicConceptOrRole roleSide(const GenLimits& lim) {
    return {coin(0.5) ? BasicKind::Role : BasicKind::InverseRole,
            roleName(lim)};
  }

  TBox drawTBox(const GenLimits& lim, bool positiveOnly) {
    TBox tbox;
    std::size_t count = pick(lim.tboxAxioms + 1);
    for (std::size_t i = 0; i < count; ++i) {
      TBoxAxiom ax;
      if (coin(0.7)) {
        ax.lhs = conceptSide(lim);
        ax.rhs = conceptSide(lim);
      } else {
        ax.lhs = roleSide(lim);
        ax.rhs = roleSide(lim);
      }
      ax.negated = positiveOnly ? false : coin(0.3);
      tbox.axioms.push_back(ax);
    }
    return tbox;
  }

  ABox drawABox(const GenLimits& lim) {
    std::vector<Atom> atoms;
    std::size_t count = pick(lim.aboxAtoms) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      if (coin(0.5)) {
        atoms.push_back(Atom{conceptName(lim), {constant(constName(lim))}});
      } else {
        atoms.push_back(Atom{roleName(lim),
                             {constant(constName(lim)),
                              constant(constName(lim))}});
      }
    }
    return ABox(std::move(atoms));
  }

  Term termFor(const GenLimits& lim, std::size_t varPool) {
    if (varPool > 0 && coin(0.55)) {
      return variable("x" + std::to_string(pick(varPool) + 1));
    }
    return constant(constName(lim));
  }

  BCQ drawBCQ(const GenLimits& lim, std::size_t maxAtoms,
              std::size_t varPool) {
    std::vector<Atom> atoms;
    std::size_t count = pick(maxAtoms) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      if (coin(0.5)) {
        atoms.push_back(Atom{conceptName(lim), {termFor(lim, varPool)}});
      } else {
        atoms.push_back(
            Atom{roleName(lim), {termFor(lim, varPool), termFor(lim, varPool)}});
      }
    }
    return BCQ(std::move(atoms));
  }

  BUCQ drawBUCQ(const GenLimits& lim) {
    std::vector<BCQ> disjuncts;
    std::size_t count = pick(lim.disjuncts) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      disjuncts.push_back(drawBCQ(lim, lim.atomsPerBCQ, 3));
    }
    return BUCQ(std::move(disjuncts));
  }

  Policy drawPolicy(const GenLimits& lim) {
    Policy policy;
    std::size_t count = pick(lim.denials + 1);
    for (std::size_t i = 0; i < count; ++i) {
      policy.denials.push_back(drawBCQ(lim, 2, 2));
    }
    return policy;
  }

  RandomInstance draw(const GenLimits& lim, bool positiveOnly) {
    RandomInstance r;
    r.tbox = drawTBox(lim, positiveOnly);
    r.policy = drawPolicy(lim);
    r.abox = drawABox(lim);
    std::size_t count = pick(lim.queries) + 1;
    for (std::size_t i = 0; i < count; ++i) r.queries.push_back(drawBUCQ(lim));
    return r;
  }

  // Instances the subset-enumeration oracle can handle: consistent, with a
  // closure small enough to enumerate.
  RandomInstance drawWithinOracleLimits(
      const GenLimits& lim = GenLimits{},
      const OracleLimits& oracle = OracleLimits{}) {
    for (;;) {
      RandomInstance r = draw(lim, false);
      if (!isConsistent(r.tbox, r.abox)) continue;
      if (closure(r.tbox, r.abox).size() > oracle.maxClosureAtoms) continue;
      return r;
    }
  }

  // Positive-inclusion-only instances whose chase saturates within the depth
  // bound on the first query (the caller re-runs the chase per query).
  RandomInstance drawChaseFriendly(
      const GenLimits& lim = GenLimits{},
      std::size_t depth = OracleLimits{}.chaseDepth) {
    for (;;) {
      RandomInstance r = draw(lim, true);
      try {
        if (chaseOutcome(r.tbox, r.abox, r.queries[0], depth).saturated) {
          return r;
        }
      } catch (const CyclicTBox&) {
      }
    }
  }

  // A random closed sentence over the signature, for evaluator and rewriting
  // equivalence properties.
  FOPtr drawSentence(const GenLimits& lim, int depth,
                     std::vector<std::string> bound = {},
                     int* freshCounter = nullptr) {
    int localCounter = 0;
    if (freshCounter == nullptr) freshCounter = &localCounter;
    if (depth <= 0 || coin(0.25)) {
      if (!bound.empty() && coin(0.15)) {
        Term left = variable(bound[pick(bound.size())]);
        Term right = coin(0.5) && bound.size() > 1
                         ? variable(bound[pick(bound.size())])
                         : constant(constName(lim));
        return foEq(left, right);
      }
      auto leafTerm = [&]() {
        if (!bound.empty() && coin(0.6)) {
          return variable(bound[pick(bound.size())]);
        }
        return constant(constName(lim));
      };
      if (coin(0.5)) return foAtom(Atom{conceptName(lim), {leafTerm()}});
      return foAtom(Atom{roleName(lim), {leafTerm(), leafTerm()}});
    }
    switch (pick(4)) {
      case 0:
        return foNot(drawSentence(lim, depth - 1, bound, freshCounter));
      case 1:
      case 2: {
        std::vector<FOPtr> parts;
        std::size_t count = pick(2) + 2;
        for (std::size_t i = 0; i < count; ++i) {
          parts.push_back(drawSentence(lim, depth - 1, bound, freshCounter));
        }
        return pick(2) == 0 ? foAnd(std::move(parts)) : foOr(std::move(parts));
      }
      default: {
        std::vector<std::string> vars;
        std::size_t count = pick(2) + 1;
        for (std::size_t i = 0; i < count; ++i) {
          vars.push_back("y" + std::to_string(++*freshCounter));
        }
        std::vector<std::string> extended = bound;
        extended.insert(extended.end(), vars.begin(), vars.end());
        return foExists(vars,
                        drawSentence(lim, depth - 1, extended, freshCounter));
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace cqe::test

#endif  // CQE_TESTS_GEN_H
