// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Domain vocabulary shared by every other module: terms, atoms, Boolean
// (unions of) conjunctive queries, inclusion axioms, policies, ABoxes, and
// the first-order formula AST produced by the rewriters.
//
// All values are immutable after construction and safe to share across
// threads. Operations are pure functions.

#ifndef CQE_CORE_H
#define CQE_CORE_H

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqe/errors.h"

namespace cqe {

// ---------------------------------------------------------------------------
// Terms and atoms
// ---------------------------------------------------------------------------

enum class TermKind { Constant, Variable };

// A constant (individual name) or a variable. The two namespaces are
// disjoint: equality always compares the kind first.
struct Term {
  TermKind kind;
  std::string name;

  bool isConstant() const { return kind == TermKind::Constant; }
  bool isVariable() const { return kind == TermKind::Variable; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.name < b.name;
  }
};

Term constant(std::string name);
Term variable(std::string name);

// Canonical text forms: constants print bare, variables with a '?' marker.
std::string renderTerm(const Term& t);

// A predicate applied to terms. Arity 1 atoms are concept memberships,
// arity 2 atoms are role memberships. (Construction does not enforce the
// arity bound; the parser and the signature check do, which leaves room for
// the documented relaxed-arity test harness.)
struct Atom {
  std::string pred;
  std::vector<Term> args;

  bool isGround() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b);
};

// Canonical text form, e.g. "buy(john,m_a)" or "buy(?x,m_b)".
std::string renderAtom(const Atom& a);

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

// Variable name -> replacement term.
using Subst = std::map<std::string, Term>;

Term applySubst(const Subst& s, const Term& t);
Atom applySubst(const Subst& s, const Atom& a);

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

// A Boolean conjunctive query: a non-empty conjunction of atoms whose
// variables are implicitly existentially quantified. Atoms keep their
// construction order (rendered output depends on it); structural duplicates
// are dropped, first occurrence wins.
class BCQ {
 public:
  explicit BCQ(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }

  // Variable names in order of first occurrence (scanning atoms, then args).
  std::vector<std::string> variableOrder() const;
  // All constant names used by the query.
  std::set<std::string> constants() const;

  friend bool operator==(const BCQ& a, const BCQ& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
};

BCQ applySubst(const Subst& s, const BCQ& q);

// A Boolean union of conjunctive queries: a non-empty disjunction of BCQs
// with independent variable scopes.
struct BUCQ {
  std::vector<BCQ> disjuncts;

  explicit BUCQ(std::vector<BCQ> ds);
  explicit BUCQ(BCQ d) : BUCQ(std::vector<BCQ>{std::move(d)}) {}

  std::set<std::string> constants() const;

  friend bool operator==(const BUCQ& a, const BUCQ& b) {
    return a.disjuncts == b.disjuncts;
  }
};

// Renames the variables of q away from `reserved`. If no variable of q
// collides with the reserved set, q is returned unchanged; otherwise every
// variable is renamed to the deterministic scheme v0, v1, ... (lowest unused
// index, in order of first occurrence).
BCQ renameApart(const BCQ& q, const std::set<std::string>& reserved);

// The conjunction of two BUCQs: the n*m product whose disjuncts pair q1's
// i-th disjunct with q2's j-th disjunct in row-major order (i outer), the
// second side renamed apart from the first before pairing. Throws
// CapacityExceeded if the product would exceed `maxDisjuncts`.
BUCQ conjoinBUCQs(const BUCQ& q1, const BUCQ& q2, std::size_t maxDisjuncts);

// Canonical form of a BCQ: atoms sorted by a variable-name-independent key,
// variables renumbered v0, v1, ... in order of first occurrence over the
// sorted sequence. Idempotent; used for duplicate detection.
BCQ canonicalBCQ(const BCQ& q);

// Dedup key: the rendered canonical form.
std::string canonKey(const BCQ& q);

// ---------------------------------------------------------------------------
// TBox and policy
// ---------------------------------------------------------------------------

// One side of an inclusion axiom. Concept-shaped sides are AtomicConcept,
// ExistsRole (exists p . top) and ExistsInverseRole (exists p^- . top);
// role-shaped sides are Role and InverseRole.
enum class BasicKind {
  AtomicConcept,
  ExistsRole,
  ExistsInverseRole,
  Role,
  InverseRole,
};

struct BasicConceptOrRole {
  BasicKind kind;
  std::string name;

  bool isConceptShaped() const {
    return kind == BasicKind::AtomicConcept || kind == BasicKind::ExistsRole ||
           kind == BasicKind::ExistsInverseRole;
  }
  bool isRoleShaped() const { return !isConceptShaped(); }

  friend bool operator==(const BasicConceptOrRole& a,
                         const BasicConceptOrRole& b) {
    return a.kind == b.kind && a.name == b.name;
  }
};

// An inclusion axiom lhs [ISA] rhs, positive or negative. Both sides are
// concept-shaped or both are role-shaped.
struct TBoxAxiom {
  BasicConceptOrRole lhs;
  BasicConceptOrRole rhs;
  bool negated = false;

  friend bool operator==(const TBoxAxiom& a, const TBoxAxiom& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs && a.negated == b.negated;
  }
};

struct TBox {
  std::vector<TBoxAxiom> axioms;

  std::vector<TBoxAxiom> positiveInclusions() const;
  std::vector<TBoxAxiom> negativeInclusions() const;
};

// A data-protection policy: denial bodies in file order (the order fixes
// rewriting output order).
struct Policy {
  std::vector<BCQ> denials;
};

// ---------------------------------------------------------------------------
// ABox
// ---------------------------------------------------------------------------

// A finite set of ground atoms, kept sorted in the canonical atom order
// (predicate name, then argument constants, lexicographically) and
// deduplicated. Indexes for evaluation are built at construction.
class ABox {
 public:
  ABox() = default;
  explicit ABox(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool contains(const Atom& a) const;
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  // Atom indices for one predicate (empty if unused).
  const std::vector<std::size_t>& withPredicate(const std::string& pred) const;
  // Sorted unique constant names appearing in the atoms.
  const std::vector<std::string>& constants() const { return constants_; }

  friend bool operator==(const ABox& a, const ABox& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
  std::set<std::string> keys_;
  std::map<std::string, std::vector<std::size_t>> byPred_;
  std::vector<std::string> constants_;
};

// ---------------------------------------------------------------------------
// First-order sentences
// ---------------------------------------------------------------------------

class FOSentence;
using FOPtr = std::shared_ptr<const FOSentence>;

// Immutable formula AST node. TRUE/FALSE exist as explicit nodes so the
// empty disjunction/conjunction cases of the rewriters have a
// representation.
class FOSentence {
 public:
  enum class Kind { True, False, Atom, Eq, Not, And, Or, Exists };

  Kind kind() const { return kind_; }
  const Atom& atom() const { return atom_; }
  const Term& left() const { return left_; }
  const Term& right() const { return right_; }
  const std::vector<FOPtr>& children() const { return children_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const FOPtr& body() const { return children_[0]; }

  friend bool structurallyEqual(const FOSentence& a, const FOSentence& b);

  // Raw constructors; prefer the smart constructors below.
  static FOPtr makeTrue();
  static FOPtr makeFalse();
  static FOPtr makeAtom(Atom a);
  static FOPtr makeEq(Term l, Term r);
  static FOPtr makeNot(FOPtr child);
  static FOPtr makeAnd(std::vector<FOPtr> children);
  static FOPtr makeOr(std::vector<FOPtr> children);
  static FOPtr makeExists(std::vector<std::string> vars, FOPtr body);

 private:
  explicit FOSentence(Kind k) : kind_(k) {}

  Kind kind_;
  Atom atom_;                      // Kind::Atom
  Term left_, right_;              // Kind::Eq
  std::vector<FOPtr> children_;    // Not (1), And, Or, Exists (body)
  std::vector<std::string> vars_;  // Exists
};

bool structurallyEqual(const FOSentence& a, const FOSentence& b);
inline bool structurallyEqual(const FOPtr& a, const FOPtr& b) {
  return structurallyEqual(*a, *b);
}

// Smart constructors. They fold constants so generated rewritings stay
// readable: NOT TRUE -> FALSE; AND/OR drop their neutral element, absorb
// their dominating element, collapse a single child, and map the empty case
// to TRUE/FALSE; EXISTS with no variables collapses to its body and an
// unsatisfiable body collapses to FALSE. (EXISTS over TRUE is kept: with an
// empty active domain it is not equivalent to TRUE.)
FOPtr foTrue();
FOPtr foFalse();
FOPtr foAtom(Atom a);
FOPtr foEq(Term l, Term r);
FOPtr foNot(FOPtr child);
FOPtr foAnd(std::vector<FOPtr> children);
FOPtr foOr(std::vector<FOPtr> children);
FOPtr foExists(std::vector<std::string> vars, FOPtr body);

// The sentence form of a query: each disjunct becomes EXISTS over its
// variables of the conjunction of its atoms.
FOPtr toSentence(const BCQ& q);
FOPtr toSentence(const BUCQ& q);

// All constant names mentioned by a sentence.
std::set<std::string> sentenceConstants(const FOPtr& phi);

// ---------------------------------------------------------------------------
// CQE specifications and instances
// ---------------------------------------------------------------------------

// What to protect: an ontology's intensional part plus a policy.
struct CQESpec {
  TBox tbox;
  Policy policy;
};

// A protected data source: a specification plus the extensional data.
struct CQEInstance {
  TBox tbox;
  Policy policy;
  ABox abox;

  CQESpec spec() const { return CQESpec{tbox, policy}; }
};

}  // namespace cqe

#endif  // CQE_CORE_H
