// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/rewriter.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "cqe/errors.h"

namespace cqe {

namespace {

std::map<std::string, int> variableOccurrences(const std::vector<Atom>& atoms) {
  std::map<std::string, int> counts;
  for (const Atom& a : atoms) {
    for (const Term& t : a.args) {
      if (t.kind == TermKind::Variable) ++counts[t.name];
    }
  }
  return counts;
}

// True for a variable with exactly one occurrence in the whole BCQ; constants
// and shared variables are bound and block the existential rewriting rules.
bool isUnbound(const Term& t, const std::map<std::string, int>& counts) {
  if (t.kind != TermKind::Variable) return false;
  auto it = counts.find(t.name);
  return it != counts.end() && it->second == 1;
}

Term freshVariable(std::set<std::string>& used) {
  for (std::size_t k = 0;; ++k) {
    std::string name = "w" + std::to_string(k);
    if (used.insert(name).second) return variable(name);
  }
}

// Applies one positive inclusion right-to-left to the atom at `index`,
// returning the replacement atom, or nullopt when the inclusion does not
// match. `used` collects variable names so fresh ones stay fresh.
std::optional<Atom> applyInclusion(const std::vector<Atom>& atoms,
                                   std::size_t index, const TBoxAxiom& ax,
                                   const std::map<std::string, int>& counts,
                                   std::set<std::string>& used) {
  const Atom& g = atoms[index];
  const BasicConceptOrRole& lhs = ax.lhs;
  const BasicConceptOrRole& rhs = ax.rhs;

  // Builds the left-hand side's atom with `t` in its distinguished position.
  auto conceptAtom = [&](const Term& t) -> Atom {
    switch (lhs.kind) {
      case BasicKind::AtomicConcept:
        return Atom{lhs.name, {t}};
      case BasicKind::ExistsRole:
        return Atom{lhs.name, {t, freshVariable(used)}};
      case BasicKind::ExistsInverseRole:
        return Atom{lhs.name, {freshVariable(used), t}};
      default:
        throw CqeError("role used where a concept was required");
    }
  };

  switch (rhs.kind) {
    case BasicKind::AtomicConcept:
      if (g.pred != rhs.name || g.args.size() != 1) return std::nullopt;
      return conceptAtom(g.args[0]);
    case BasicKind::ExistsRole:
      if (g.pred != rhs.name || g.args.size() != 2) return std::nullopt;
      if (!isUnbound(g.args[1], counts)) return std::nullopt;
      return conceptAtom(g.args[0]);
    case BasicKind::ExistsInverseRole:
      if (g.pred != rhs.name || g.args.size() != 2) return std::nullopt;
      if (!isUnbound(g.args[0], counts)) return std::nullopt;
      return conceptAtom(g.args[1]);
    case BasicKind::Role:
    case BasicKind::InverseRole: {
      if (g.pred != rhs.name || g.args.size() != 2) return std::nullopt;
      if (lhs.kind != BasicKind::Role && lhs.kind != BasicKind::InverseRole) {
        throw CqeError("concept used where a role was required");
      }
      // Whether the lhs role reads the pair in g's order or swapped.
      bool swapped = (rhs.kind == BasicKind::InverseRole) !=
                     (lhs.kind == BasicKind::InverseRole);
      if (swapped) return Atom{lhs.name, {g.args[1], g.args[0]}};
      return Atom{lhs.name, {g.args[0], g.args[1]}};
    }
  }
  return std::nullopt;
}

Term resolve(Term t, const Subst& subst) {
  while (t.kind == TermKind::Variable) {
    auto it = subst.find(t.name);
    if (it == subst.end()) break;
    t = it->second;
  }
  return t;
}

// Most general unifier of two atoms (same predicate and arity), or nullopt.
std::optional<Subst> unifyAtoms(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
  Subst subst;
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    Term u = resolve(a.args[k], subst);
    Term v = resolve(b.args[k], subst);
    if (u == v) continue;
    if (u.kind == TermKind::Variable) {
      subst[u.name] = v;
    } else if (v.kind == TermKind::Variable) {
      subst[v.name] = u;
    } else {
      return std::nullopt;  // distinct constants
    }
  }
  return subst;
}

std::vector<Atom> substAtoms(const std::vector<Atom>& atoms, const Subst& s) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    Atom b{a.pred, {}};
    b.args.reserve(a.args.size());
    for (const Term& t : a.args) b.args.push_back(resolve(t, s));
    out.push_back(std::move(b));
  }
  return out;
}

std::set<std::string> variableNames(const BCQ& q) {
  std::vector<std::string> order = q.variableOrder();
  return std::set<std::string>(order.begin(), order.end());
}

}  // namespace

BUCQ perfectRef(const BUCQ& q, const TBox& tbox, std::size_t maxDisjuncts) {
  std::vector<BCQ> out;
  std::set<std::string> seen;
  std::deque<std::size_t> frontier;  // indices into `out`

  auto addCandidate = [&](const BCQ& candidate) {
    BCQ canon = canonicalBCQ(candidate);
    std::string key = canonKey(canon);
    if (!seen.insert(key).second) return;
    if (out.size() >= maxDisjuncts) {
      throw CapacityExceeded("perfectRef exceeded the disjunct cap of " +
                             std::to_string(maxDisjuncts));
    }
    frontier.push_back(out.size());
    out.push_back(std::move(canon));
  };

  for (const BCQ& d : q.disjuncts) addCandidate(d);

  std::vector<TBoxAxiom> pis = tbox.positiveInclusions();
  while (!frontier.empty()) {
    // `out` may reallocate while we append, so copy the current disjunct.
    BCQ cur = out[frontier.front()];
    frontier.pop_front();
    const std::vector<Atom>& atoms = cur.atoms();
    std::map<std::string, int> counts = variableOccurrences(atoms);
    std::set<std::string> used = variableNames(cur);

    // (a) rewrite one atom by one positive inclusion, right-to-left.
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (const TBoxAxiom& ax : pis) {
        std::set<std::string> usedHere = used;
        std::optional<Atom> replacement =
            applyInclusion(atoms, i, ax, counts, usedHere);
        if (!replacement) continue;
        std::vector<Atom> next = atoms;
        next[i] = *replacement;
        addCandidate(BCQ(std::move(next)));
      }
    }

    // (b) reduce: unify any two atoms and keep the merged query.
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        std::optional<Subst> mgu = unifyAtoms(atoms[i], atoms[j]);
        if (!mgu) continue;
        addCandidate(BCQ(substAtoms(atoms, *mgu)));
      }
    }
  }
  return BUCQ(std::move(out));
}

std::optional<BUCQ> policyQuery(const Policy& policy) {
  if (policy.denials.empty()) return std::nullopt;
  return BUCQ(policy.denials);
}

std::optional<BUCQ> unsatQuery(const TBox& tbox) {
  std::vector<BCQ> disjuncts;
  for (const TBoxAxiom& ax : tbox.axioms) {
    if (!ax.negated) continue;
    std::set<std::string> used;
    Term x = variable("x");
    used.insert("x");
    // Both sides read off the same distinguished term; role sides share both.
    auto sideAtom = [&](const BasicConceptOrRole& side,
                        const Term& second) -> Atom {
      switch (side.kind) {
        case BasicKind::AtomicConcept:
          return Atom{side.name, {x}};
        case BasicKind::ExistsRole:
          return Atom{side.name, {x, freshVariable(used)}};
        case BasicKind::ExistsInverseRole:
          return Atom{side.name, {freshVariable(used), x}};
        case BasicKind::Role:
          return Atom{side.name, {x, second}};
        case BasicKind::InverseRole:
          return Atom{side.name, {second, x}};
      }
      throw CqeError("unreachable basic kind");
    };
    Term y = variable("y");
    used.insert("y");
    std::vector<Atom> atoms;
    atoms.push_back(sideAtom(ax.lhs, y));
    atoms.push_back(sideAtom(ax.rhs, y));
    disjuncts.emplace_back(std::move(atoms));
  }
  if (disjuncts.empty()) return std::nullopt;
  return BUCQ(std::move(disjuncts));
}

std::vector<Mapping> enumerateMappings(const BCQ& qd, const BCQ& qr) {
  const std::vector<Atom>& dAtoms = qd.atoms();
  const std::vector<Atom>& rAtoms = qr.atoms();

  // Candidate target atoms per source atom, in qr order.
  std::vector<std::vector<std::size_t>> candidates(dAtoms.size());
  for (std::size_t i = 0; i < dAtoms.size(); ++i) {
    for (std::size_t j = 0; j < rAtoms.size(); ++j) {
      if (dAtoms[i].pred == rAtoms[j].pred &&
          dAtoms[i].args.size() == rAtoms[j].args.size()) {
        candidates[i].push_back(j);
      }
    }
    if (candidates[i].empty()) return {};
  }

  // Position of each qr variable in qr's first-occurrence order; used to
  // orient unifications among qr variables toward the earlier one.
  std::map<std::string, std::size_t> qrRank;
  {
    std::vector<std::string> order = qr.variableOrder();
    for (std::size_t k = 0; k < order.size(); ++k) qrRank[order[k]] = k;
  }
  auto isQrVar = [&](const Term& t) {
    return t.kind == TermKind::Variable && qrRank.count(t.name) > 0;
  };

  std::vector<Mapping> result;
  std::vector<std::size_t> choice(dAtoms.size(), 0);
  while (true) {
    // Union-find over the terms joined by this atom-choice vector.
    std::map<Term, Term> parent;
    auto find = [&](Term t) {
      while (true) {
        auto it = parent.find(t);
        if (it == parent.end() || it->second == t) return t;
        t = it->second;
      }
    };
    bool ok = true;
    for (std::size_t i = 0; i < dAtoms.size() && ok; ++i) {
      const Atom& src = dAtoms[i];
      const Atom& dst = rAtoms[candidates[i][choice[i]]];
      for (std::size_t k = 0; k < src.args.size(); ++k) {
        Term a = find(src.args[k]);
        Term b = find(dst.args[k]);
        if (a == b) continue;
        // Representative preference: constants, then qr variables by earlier
        // occurrence, then qd variables (which must never end up on top).
        auto rank = [&](const Term& t) -> long {
          if (t.kind == TermKind::Constant) return -1;
          if (isQrVar(t)) return static_cast<long>(qrRank.at(t.name));
          return static_cast<long>(qrRank.size());  // qd variable
        };
        if (a.kind == TermKind::Constant && b.kind == TermKind::Constant) {
          ok = false;  // distinct constants clash
          break;
        }
        if (rank(a) <= rank(b)) {
          parent[b] = a;
        } else {
          parent[a] = b;
        }
      }
    }
    if (ok) {
      Mapping m;
      m.h.reserve(dAtoms.size());
      for (std::size_t i = 0; i < dAtoms.size(); ++i) {
        m.h.push_back(candidates[i][choice[i]]);
      }
      for (const auto& [child, _] : parent) {
        if (child.kind != TermKind::Variable) continue;
        Term rep = find(child);
        if (rep == child) continue;
        m.sigma[child.name] = rep;
        if (qrRank.count(child.name) > 0) m.sigmaRestricted[child.name] = rep;
      }
      result.push_back(std::move(m));
    }
    // Advance the odometer (last position fastest).
    std::size_t pos = dAtoms.size();
    while (pos > 0) {
      --pos;
      if (++choice[pos] < candidates[pos].size()) break;
      choice[pos] = 0;
      if (pos == 0) return result;
    }
    if (dAtoms.empty()) return result;
  }
}

FOPtr saturate(const BCQ& qr, const BCQ& qd) {
  std::vector<FOPtr> perMapping;
  std::vector<std::string> qrOrder = qr.variableOrder();
  for (const Mapping& m : enumerateMappings(qd, qr)) {
    std::vector<FOPtr> equalities;
    for (const std::string& v : qrOrder) {
      auto it = m.sigmaRestricted.find(v);
      if (it == m.sigmaRestricted.end()) continue;
      equalities.push_back(foEq(variable(v), it->second));
    }
    perMapping.push_back(foAnd(std::move(equalities)));
  }
  return foOr(std::move(perMapping));
}

FOPtr braveRef(const BUCQ& q, const TBox& tbox, const Policy& policy,
               std::size_t maxDisjuncts) {
  BUCQ rewritten = perfectRef(q, tbox, maxDisjuncts);
  std::vector<BCQ> denials;
  if (std::optional<BUCQ> pq = policyQuery(policy)) {
    denials = perfectRef(*pq, tbox, maxDisjuncts).disjuncts;
  }

  std::vector<FOPtr> disjunctSentences;
  for (const BCQ& qr : rewritten.disjuncts) {
    std::vector<FOPtr> body;
    for (const Atom& a : qr.atoms()) body.push_back(foAtom(a));
    std::set<std::string> reserved = variableNames(qr);
    for (const BCQ& qd : denials) {
      BCQ apart = renameApart(qd, reserved);
      body.push_back(foNot(saturate(qr, apart)));
    }
    disjunctSentences.push_back(
        foExists(qr.variableOrder(), foAnd(std::move(body))));
  }
  return foOr(std::move(disjunctSentences));
}

FOPtr stateRef(const CQESpec& spec, const std::vector<BUCQ>& queries,
               std::size_t i, const std::set<std::size_t>& guess,
               std::size_t maxDisjuncts) {
  if (i < 1 || i > queries.size()) {
    throw CqeError("stateRef index " + std::to_string(i) +
                   " outside 1.." + std::to_string(queries.size()));
  }
  for (std::size_t g : guess) {
    if (g < 1 || g >= i) {
      throw CqeError("stateRef guess index " + std::to_string(g) +
                     " outside 1.." + std::to_string(i - 1));
    }
  }
  // Conjunction of the guessed-true queries with index < bound, then `last`.
  auto conjoinPrefix = [&](std::size_t bound, const BUCQ& last) -> BUCQ {
    std::optional<BUCQ> acc;
    for (std::size_t ell : guess) {
      if (ell >= bound) break;
      const BUCQ& next = queries[ell - 1];
      acc = acc ? conjoinBUCQs(*acc, next, maxDisjuncts) : next;
    }
    return acc ? conjoinBUCQs(*acc, last, maxDisjuncts) : last;
  };

  std::vector<FOPtr> parts;
  for (std::size_t j = 1; j < i; ++j) {
    if (guess.count(j) > 0) continue;
    BUCQ conj = conjoinPrefix(j, queries[j - 1]);
    parts.push_back(foNot(braveRef(conj, spec.tbox, spec.policy, maxDisjuncts)));
  }
  BUCQ finalConj = conjoinPrefix(i, queries[i - 1]);
  parts.push_back(braveRef(finalConj, spec.tbox, spec.policy, maxDisjuncts));
  return foAnd(std::move(parts));
}

namespace {

// Reachability in the positive-inclusion graph, used by atomRewr. Concept
// nodes are basic concepts; role reachability tracks orientation. Role
// inclusions induce concept edges between the corresponding existential
// restrictions.
class InclusionGraph {
 public:
  explicit InclusionGraph(const TBox& tbox) : pis_(tbox.positiveInclusions()) {}

  // All basic concepts that reach `target` (itself first), in breadth-first
  // discovery order following the TBox's axiom order.
  std::vector<BasicConceptOrRole> reachingConcepts(
      const BasicConceptOrRole& target) const {
    std::vector<BasicConceptOrRole> out{target};
    std::set<std::string> seen{conceptKeyOf(target)};
    for (std::size_t i = 0; i < out.size(); ++i) {
      BasicConceptOrRole cur = out[i];
      for (const TBoxAxiom& ax : pis_) {
        for (const BasicConceptOrRole& pred : conceptPredecessors(cur, ax)) {
          if (seen.insert(conceptKeyOf(pred)).second) out.push_back(pred);
        }
      }
    }
    return out;
  }

  // All oriented roles (name, swapped?) that reach the direct reading of
  // `roleName`, itself first.
  std::vector<std::pair<std::string, bool>> reachingRoles(
      const std::string& roleName) const {
    std::vector<std::pair<std::string, bool>> out{{roleName, false}};
    std::set<std::string> seen{roleKeyOf(out[0])};
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::pair<std::string, bool> cur = out[i];
      for (const TBoxAxiom& ax : pis_) {
        if (!ax.lhs.isRoleShaped() || !ax.rhs.isRoleShaped()) continue;
        // ax gives lhs ⊑ rhs and its inverse reading lhs⁻ ⊑ rhs⁻.
        bool lhsInv = ax.lhs.kind == BasicKind::InverseRole;
        bool rhsInv = ax.rhs.kind == BasicKind::InverseRole;
        for (bool flip : {false, true}) {
          if (ax.rhs.name != cur.first) continue;
          if ((rhsInv != flip) != cur.second) continue;
          std::pair<std::string, bool> pred{ax.lhs.name, lhsInv != flip};
          if (seen.insert(roleKeyOf(pred)).second) out.push_back(pred);
        }
      }
    }
    return out;
  }

 private:
  static std::string conceptKeyOf(const BasicConceptOrRole& b) {
    switch (b.kind) {
      case BasicKind::AtomicConcept:
        return "A:" + b.name;
      case BasicKind::ExistsRole:
        return "E:" + b.name;
      case BasicKind::ExistsInverseRole:
        return "I:" + b.name;
      default:
        throw CqeError("role node in concept graph");
    }
  }

  static std::string roleKeyOf(const std::pair<std::string, bool>& r) {
    return (r.second ? "-" : "+") + r.first;
  }

  // Concept-graph predecessors of `node` contributed by one axiom: a concept
  // inclusion with matching right side, or a role inclusion inducing an edge
  // between existential restrictions.
  std::vector<BasicConceptOrRole> conceptPredecessors(
      const BasicConceptOrRole& node, const TBoxAxiom& ax) const {
    std::vector<BasicConceptOrRole> preds;
    if (ax.lhs.isConceptShaped() && ax.rhs.isConceptShaped()) {
      if (ax.rhs == node) preds.push_back(ax.lhs);
      return preds;
    }
    if (!ax.lhs.isRoleShaped() || !ax.rhs.isRoleShaped()) return preds;
    if (node.kind != BasicKind::ExistsRole &&
        node.kind != BasicKind::ExistsInverseRole) {
      return preds;
    }
    bool lhsInv = ax.lhs.kind == BasicKind::InverseRole;
    bool rhsInv = ax.rhs.kind == BasicKind::InverseRole;
    bool nodeInv = node.kind == BasicKind::ExistsInverseRole;
    // Readings: ∃lhs ⊑ ∃rhs (flip = false) and ∃lhs⁻ ⊑ ∃rhs⁻ (flip = true).
    for (bool flip : {false, true}) {
      if (ax.rhs.name != node.name) continue;
      if ((rhsInv != flip) != nodeInv) continue;
      bool predInv = lhsInv != flip;
      preds.push_back(BasicConceptOrRole{
          predInv ? BasicKind::ExistsInverseRole : BasicKind::ExistsRole,
          ax.lhs.name});
    }
    return preds;
  }

  std::vector<TBoxAxiom> pis_;
};

class AtomRewriter {
 public:
  AtomRewriter(const TBox& tbox, std::set<std::string> usedVars)
      : graph_(tbox), used_(std::move(usedVars)) {}

  FOPtr rewrite(const FOPtr& node) {
    switch (node->kind()) {
      case FOSentence::Kind::True:
      case FOSentence::Kind::False:
      case FOSentence::Kind::Eq:
        return node;
      case FOSentence::Kind::Atom:
        return rewriteAtom(node->atom());
      case FOSentence::Kind::Not:
        return foNot(rewrite(node->body()));
      case FOSentence::Kind::And: {
        std::vector<FOPtr> kids;
        for (const FOPtr& c : node->children()) kids.push_back(rewrite(c));
        return foAnd(std::move(kids));
      }
      case FOSentence::Kind::Or: {
        std::vector<FOPtr> kids;
        for (const FOPtr& c : node->children()) kids.push_back(rewrite(c));
        return foOr(std::move(kids));
      }
      case FOSentence::Kind::Exists:
        return foExists(node->vars(), rewrite(node->body()));
    }
    throw CqeError("unreachable sentence kind");
  }

 private:
  FOPtr rewriteAtom(const Atom& g) {
    std::vector<FOPtr> options;
    if (g.args.size() == 1) {
      BasicConceptOrRole self{BasicKind::AtomicConcept, g.pred};
      for (const BasicConceptOrRole& b : graph_.reachingConcepts(self)) {
        options.push_back(conceptQuery(b, g.args[0]));
      }
    } else if (g.args.size() == 2) {
      for (const auto& [name, swapped] : graph_.reachingRoles(g.pred)) {
        if (swapped) {
          options.push_back(foAtom(Atom{name, {g.args[1], g.args[0]}}));
        } else {
          options.push_back(foAtom(Atom{name, {g.args[0], g.args[1]}}));
        }
      }
    } else {
      return foAtom(g);  // non-binary predicates have no inclusions
    }
    return foOr(std::move(options));
  }

  FOPtr conceptQuery(const BasicConceptOrRole& b, const Term& t) {
    switch (b.kind) {
      case BasicKind::AtomicConcept:
        return foAtom(Atom{b.name, {t}});
      case BasicKind::ExistsRole: {
        Term y = freshVariable(used_);
        return foExists({y.name}, foAtom(Atom{b.name, {t, y}}));
      }
      case BasicKind::ExistsInverseRole: {
        Term y = freshVariable(used_);
        return foExists({y.name}, foAtom(Atom{b.name, {y, t}}));
      }
      default:
        throw CqeError("role node in concept rewriting");
    }
  }

  InclusionGraph graph_;
  std::set<std::string> used_;
};

void collectVariables(const FOPtr& node, std::set<std::string>& out) {
  switch (node->kind()) {
    case FOSentence::Kind::True:
    case FOSentence::Kind::False:
      return;
    case FOSentence::Kind::Atom:
      for (const Term& t : node->atom().args) {
        if (t.kind == TermKind::Variable) out.insert(t.name);
      }
      return;
    case FOSentence::Kind::Eq:
      if (node->left().kind == TermKind::Variable) out.insert(node->left().name);
      if (node->right().kind == TermKind::Variable) {
        out.insert(node->right().name);
      }
      return;
    case FOSentence::Kind::Not:
      collectVariables(node->body(), out);
      return;
    case FOSentence::Kind::And:
    case FOSentence::Kind::Or:
      for (const FOPtr& c : node->children()) collectVariables(c, out);
      return;
    case FOSentence::Kind::Exists:
      for (const std::string& v : node->vars()) out.insert(v);
      collectVariables(node->body(), out);
      return;
  }
}

}  // namespace

FOPtr atomRewr(const FOPtr& phi, const TBox& tbox) {
  std::set<std::string> used;
  collectVariables(phi, used);
  AtomRewriter rewriter(tbox, std::move(used));
  return rewriter.rewrite(phi);
}

}  // namespace cqe
