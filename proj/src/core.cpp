// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/core.h"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cqe {

Term constant(std::string name) {
  return Term{TermKind::Constant, std::move(name)};
}

Term variable(std::string name) {
  return Term{TermKind::Variable, std::move(name)};
}

std::string renderTerm(const Term& t) {
  return t.isVariable() ? "?" + t.name : t.name;
}

bool Atom::isGround() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return t.isConstant(); });
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.pred != b.pred) return a.pred < b.pred;
  return a.args < b.args;
}

std::string renderAtom(const Atom& a) {
  std::string out = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i > 0) out += ",";
    out += renderTerm(a.args[i]);
  }
  out += ")";
  return out;
}

Term applySubst(const Subst& s, const Term& t) {
  if (t.isVariable()) {
    auto it = s.find(t.name);
    if (it != s.end()) return it->second;
  }
  return t;
}

Atom applySubst(const Subst& s, const Atom& a) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(applySubst(s, t));
  return out;
}

// ---------------------------------------------------------------------------
// BCQ / BUCQ
// ---------------------------------------------------------------------------

BCQ::BCQ(std::vector<Atom> atoms) {
  if (atoms.empty()) throw CqeError("a conjunctive query needs at least one atom");
  for (auto& a : atoms) {
    if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end()) {
      atoms_.push_back(std::move(a));
    }
  }
}

std::vector<std::string> BCQ::variableOrder() const {
  std::vector<std::string> order;
  for (const Atom& a : atoms_) {
    for (const Term& t : a.args) {
      if (t.isVariable() &&
          std::find(order.begin(), order.end(), t.name) == order.end()) {
        order.push_back(t.name);
      }
    }
  }
  return order;
}

std::set<std::string> BCQ::constants() const {
  std::set<std::string> out;
  for (const Atom& a : atoms_) {
    for (const Term& t : a.args) {
      if (t.isConstant()) out.insert(t.name);
    }
  }
  return out;
}

BCQ applySubst(const Subst& s, const BCQ& q) {
  std::vector<Atom> atoms;
  atoms.reserve(q.atoms().size());
  for (const Atom& a : q.atoms()) atoms.push_back(applySubst(s, a));
  return BCQ(std::move(atoms));
}

BUCQ::BUCQ(std::vector<BCQ> ds) : disjuncts(std::move(ds)) {
  if (disjuncts.empty()) throw CqeError("a union query needs at least one disjunct");
}

std::set<std::string> BUCQ::constants() const {
  std::set<std::string> out;
  for (const BCQ& d : disjuncts) {
    auto cs = d.constants();
    out.insert(cs.begin(), cs.end());
  }
  return out;
}

BCQ renameApart(const BCQ& q, const std::set<std::string>& reserved) {
  std::vector<std::string> order = q.variableOrder();
  bool collides = std::any_of(order.begin(), order.end(),
                              [&](const std::string& v) { return reserved.count(v) > 0; });
  if (!collides) return q;

  Subst renaming;
  std::set<std::string> used;
  std::size_t next = 0;
  for (const std::string& v : order) {
    std::string fresh;
    for (;; ++next) {
      fresh = "v" + std::to_string(next);
      if (reserved.count(fresh) == 0 && used.count(fresh) == 0) break;
    }
    used.insert(fresh);
    renaming[v] = variable(fresh);
    ++next;
  }
  return applySubst(renaming, q);
}

BUCQ conjoinBUCQs(const BUCQ& q1, const BUCQ& q2, std::size_t maxDisjuncts) {
  std::size_t n = q1.disjuncts.size();
  std::size_t m = q2.disjuncts.size();
  if (n * m > maxDisjuncts) {
    throw CapacityExceeded("conjunction would produce " + std::to_string(n * m) +
                           " disjuncts (cap " + std::to_string(maxDisjuncts) + ")");
  }
  std::vector<BCQ> out;
  out.reserve(n * m);
  for (const BCQ& d1 : q1.disjuncts) {
    std::set<std::string> reserved;
    for (const std::string& v : d1.variableOrder()) reserved.insert(v);
    for (const BCQ& d2 : q2.disjuncts) {
      BCQ d2r = renameApart(d2, reserved);
      std::vector<Atom> atoms = d1.atoms();
      for (const Atom& a : d2r.atoms()) atoms.push_back(a);
      out.push_back(BCQ(std::move(atoms)));
    }
  }
  return BUCQ(std::move(out));
}

namespace {

// Sort key that ignores variable names: variables are numbered by first
// occurrence within the atom, so atoms that differ only in naming compare
// equal and the later canonical renaming cannot disturb the order.
std::string variableBlindKey(const Atom& a) {
  std::string key = a.pred + "/";
  std::vector<std::string> seen;
  for (const Term& t : a.args) {
    if (t.isConstant()) {
      key += "c:" + t.name + ";";
    } else {
      auto it = std::find(seen.begin(), seen.end(), t.name);
      std::size_t idx = it == seen.end() ? seen.size() : static_cast<std::size_t>(it - seen.begin());
      if (it == seen.end()) seen.push_back(t.name);
      key += "v" + std::to_string(idx) + ";";
    }
  }
  return key;
}

}  // namespace

BCQ canonicalBCQ(const BCQ& q) {
  std::vector<Atom> atoms = q.atoms();
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return variableBlindKey(a) < variableBlindKey(b);
  });
  Subst renaming;
  std::size_t next = 0;
  for (const Atom& a : atoms) {
    for (const Term& t : a.args) {
      if (t.isVariable() && renaming.find(t.name) == renaming.end()) {
        renaming[t.name] = variable("v" + std::to_string(next++));
      }
    }
  }
  std::vector<Atom> renamed;
  renamed.reserve(atoms.size());
  for (const Atom& a : atoms) renamed.push_back(applySubst(renaming, a));
  return BCQ(std::move(renamed));
}

std::string canonKey(const BCQ& q) {
  BCQ canon = canonicalBCQ(q);
  std::string key;
  for (const Atom& a : canon.atoms()) {
    if (!key.empty()) key += "&";
    key += renderAtom(a);
  }
  return key;
}

// ---------------------------------------------------------------------------
// TBox
// ---------------------------------------------------------------------------

std::vector<TBoxAxiom> TBox::positiveInclusions() const {
  std::vector<TBoxAxiom> out;
  for (const TBoxAxiom& ax : axioms) {
    if (!ax.negated) out.push_back(ax);
  }
  return out;
}

std::vector<TBoxAxiom> TBox::negativeInclusions() const {
  std::vector<TBoxAxiom> out;
  for (const TBoxAxiom& ax : axioms) {
    if (ax.negated) out.push_back(ax);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ABox
// ---------------------------------------------------------------------------

ABox::ABox(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!a.isGround()) {
      throw CqeError("ABox atom is not ground: " + renderAtom(a));
    }
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  atoms_ = std::move(atoms);

  std::set<std::string> consts;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    keys_.insert(renderAtom(atoms_[i]));
    byPred_[atoms_[i].pred].push_back(i);
    for (const Term& t : atoms_[i].args) consts.insert(t.name);
  }
  constants_.assign(consts.begin(), consts.end());
}

bool ABox::contains(const Atom& a) const { return keys_.count(renderAtom(a)) > 0; }

const std::vector<std::size_t>& ABox::withPredicate(const std::string& pred) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = byPred_.find(pred);
  return it == byPred_.end() ? kEmpty : it->second;
}

// ---------------------------------------------------------------------------
// FOSentence
// ---------------------------------------------------------------------------

FOPtr FOSentence::makeTrue() { return FOPtr(new FOSentence(Kind::True)); }

FOPtr FOSentence::makeFalse() { return FOPtr(new FOSentence(Kind::False)); }

FOPtr FOSentence::makeAtom(Atom a) {
  auto* node = new FOSentence(Kind::Atom);
  node->atom_ = std::move(a);
  return FOPtr(node);
}

FOPtr FOSentence::makeEq(Term l, Term r) {
  auto* node = new FOSentence(Kind::Eq);
  node->left_ = std::move(l);
  node->right_ = std::move(r);
  return FOPtr(node);
}

FOPtr FOSentence::makeNot(FOPtr child) {
  auto* node = new FOSentence(Kind::Not);
  node->children_.push_back(std::move(child));
  return FOPtr(node);
}

FOPtr FOSentence::makeAnd(std::vector<FOPtr> children) {
  if (children.empty()) throw CqeError("AND requires at least one child");
  auto* node = new FOSentence(Kind::And);
  node->children_ = std::move(children);
  return FOPtr(node);
}

FOPtr FOSentence::makeOr(std::vector<FOPtr> children) {
  if (children.empty()) throw CqeError("OR requires at least one child");
  auto* node = new FOSentence(Kind::Or);
  node->children_ = std::move(children);
  return FOPtr(node);
}

FOPtr FOSentence::makeExists(std::vector<std::string> vars, FOPtr body) {
  if (vars.empty()) throw CqeError("EXISTS requires at least one variable");
  auto* node = new FOSentence(Kind::Exists);
  node->vars_ = std::move(vars);
  node->children_.push_back(std::move(body));
  return FOPtr(node);
}

bool structurallyEqual(const FOSentence& a, const FOSentence& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FOSentence::Kind::True:
    case FOSentence::Kind::False:
      return true;
    case FOSentence::Kind::Atom:
      return a.atom() == b.atom();
    case FOSentence::Kind::Eq:
      return a.left() == b.left() && a.right() == b.right();
    case FOSentence::Kind::Exists:
      if (a.vars() != b.vars()) return false;
      [[fallthrough]];
    case FOSentence::Kind::Not:
    case FOSentence::Kind::And:
    case FOSentence::Kind::Or: {
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (!structurallyEqual(*a.children()[i], *b.children()[i])) return false;
      }
      return true;
    }
  }
  return false;
}

FOPtr foTrue() { return FOSentence::makeTrue(); }

FOPtr foFalse() { return FOSentence::makeFalse(); }

FOPtr foAtom(Atom a) { return FOSentence::makeAtom(std::move(a)); }

FOPtr foEq(Term l, Term r) { return FOSentence::makeEq(std::move(l), std::move(r)); }

FOPtr foNot(FOPtr child) {
  if (child->kind() == FOSentence::Kind::True) return foFalse();
  if (child->kind() == FOSentence::Kind::False) return foTrue();
  return FOSentence::makeNot(std::move(child));
}

FOPtr foAnd(std::vector<FOPtr> children) {
  std::vector<FOPtr> kept;
  for (FOPtr& c : children) {
    if (c->kind() == FOSentence::Kind::False) return foFalse();
    if (c->kind() == FOSentence::Kind::True) continue;
    kept.push_back(std::move(c));
  }
  if (kept.empty()) return foTrue();
  if (kept.size() == 1) return kept[0];
  return FOSentence::makeAnd(std::move(kept));
}

FOPtr foOr(std::vector<FOPtr> children) {
  std::vector<FOPtr> kept;
  for (FOPtr& c : children) {
    if (c->kind() == FOSentence::Kind::True) return foTrue();
    if (c->kind() == FOSentence::Kind::False) continue;
    kept.push_back(std::move(c));
  }
  if (kept.empty()) return foFalse();
  if (kept.size() == 1) return kept[0];
  return FOSentence::makeOr(std::move(kept));
}

FOPtr foExists(std::vector<std::string> vars, FOPtr body) {
  if (vars.empty()) return body;
  if (body->kind() == FOSentence::Kind::False) return foFalse();
  return FOSentence::makeExists(std::move(vars), std::move(body));
}

FOPtr toSentence(const BCQ& q) {
  std::vector<FOPtr> conj;
  conj.reserve(q.atoms().size());
  for (const Atom& a : q.atoms()) conj.push_back(foAtom(a));
  return foExists(q.variableOrder(), foAnd(std::move(conj)));
}

FOPtr toSentence(const BUCQ& q) {
  std::vector<FOPtr> disj;
  disj.reserve(q.disjuncts.size());
  for (const BCQ& d : q.disjuncts) disj.push_back(toSentence(d));
  return foOr(std::move(disj));
}

namespace {

void collectConstants(const FOPtr& phi, std::set<std::string>& out) {
  switch (phi->kind()) {
    case FOSentence::Kind::True:
    case FOSentence::Kind::False:
      break;
    case FOSentence::Kind::Atom:
      for (const Term& t : phi->atom().args) {
        if (t.isConstant()) out.insert(t.name);
      }
      break;
    case FOSentence::Kind::Eq:
      if (phi->left().isConstant()) out.insert(phi->left().name);
      if (phi->right().isConstant()) out.insert(phi->right().name);
      break;
    default:
      for (const FOPtr& c : phi->children()) collectConstants(c, out);
      break;
  }
}

}  // namespace

std::set<std::string> sentenceConstants(const FOPtr& phi) {
  std::set<std::string> out;
  collectConstants(phi, out);
  return out;
}

}  // namespace cqe
