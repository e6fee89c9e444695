// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/evaluator.h"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "cqe/errors.h"
#include "cqe/rewriter.h"

namespace cqe {

namespace {

using Env = std::map<std::string, std::string>;

// One way an existential block can be satisfied through a single ABox atom:
// a positive atom pattern whose `wildcards` (locally quantified variables of
// an inner EXISTS) match anything without binding.
struct AtomPattern {
  const Atom* atom;
  std::set<std::string> wildcards;
};

// A unit of work inside an existential block: either a single atom, a
// disjunction of atom patterns (the shape atom rewriting produces), or an
// arbitrary residual sentence evaluated once all variables are bound.
struct PlanItem {
  enum class Kind { SingleAtom, AtomChoices, Residual } kind;
  std::vector<AtomPattern> patterns;  // SingleAtom uses exactly one
  const FOSentence* residual = nullptr;
};

class Evaluator {
 public:
  Evaluator(const ABox& abox, const FOPtr& sentence) : abox_(abox) {
    std::set<std::string> consts = sentenceConstants(sentence);
    consts.insert(abox.constants().begin(), abox.constants().end());
    domain_.assign(consts.begin(), consts.end());
  }

  bool evalClosed(const FOPtr& phi) {
    Env env;
    return eval(phi.get(), env);
  }

  // Enumerates every assignment of `freeVars` satisfying psi into `sink`.
  void enumerateSolutions(const FOPtr& psi,
                          const std::vector<std::string>& freeVars,
                          const std::function<void(const Env&)>& sink) {
    Env env;
    solveExists(freeVars, psi.get(), env, [&](Env& solution) {
      sink(solution);
      return false;  // keep enumerating
    });
  }

 private:
  bool eval(const FOSentence* node, Env& env) {
    switch (node->kind()) {
      case FOSentence::Kind::True:
        return true;
      case FOSentence::Kind::False:
        return false;
      case FOSentence::Kind::Atom: {
        Atom ground = resolveAtom(node->atom(), env);
        return abox_.contains(ground);
      }
      case FOSentence::Kind::Eq:
        return resolveTerm(node->left(), env) == resolveTerm(node->right(), env);
      case FOSentence::Kind::Not:
        return !eval(node->body().get(), env);
      case FOSentence::Kind::And:
        for (const FOPtr& c : node->children()) {
          if (!eval(c.get(), env)) return false;
        }
        return true;
      case FOSentence::Kind::Or:
        for (const FOPtr& c : node->children()) {
          if (eval(c.get(), env)) return true;
        }
        return false;
      case FOSentence::Kind::Exists:
        return solveExists(node->vars(), node->body().get(), env,
                           [](Env&) { return true; });
    }
    throw CqeError("unreachable sentence kind");
  }

  std::string resolveTerm(const Term& t, const Env& env) const {
    if (t.kind == TermKind::Constant) return t.name;
    auto it = env.find(t.name);
    if (it == env.end()) {
      throw CqeError("free variable ?" + t.name + " in evaluation");
    }
    return it->second;
  }

  Atom resolveAtom(const Atom& a, const Env& env) const {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(constant(resolveTerm(t, env)));
    return out;
  }

  // Existentially solves `body` with `vars` open, calling `onSolution` for
  // each satisfying environment; a true return from the callback stops the
  // search and propagates true.
  bool solveExists(const std::vector<std::string>& vars,
                   const FOSentence* body, Env& env,
                   const std::function<bool(Env&)>& onSolution) {
    // Collect the open variables of this block, flattening nested EXISTS.
    std::vector<std::string> open = vars;
    const FOSentence* flatBody = body;
    while (flatBody->kind() == FOSentence::Kind::Exists) {
      const std::vector<std::string>& inner = flatBody->vars();
      open.insert(open.end(), inner.begin(), inner.end());
      flatBody = flatBody->body().get();
    }

    // Shadowing guard: remember and clear outer bindings of the open vars.
    std::vector<std::pair<std::string, std::optional<std::string>>> saved;
    for (const std::string& v : open) {
      auto it = env.find(v);
      if (it != env.end()) {
        saved.emplace_back(v, it->second);
        env.erase(it);
      } else {
        saved.emplace_back(v, std::nullopt);
      }
    }

    std::vector<PlanItem> items = planItems(flatBody);
    std::vector<bool> done(items.size(), false);
    bool stopped = search(items, done, open, env, onSolution);

    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      if (it->second) {
        env[it->first] = *it->second;
      } else {
        env.erase(it->first);
      }
    }
    return stopped;
  }

  // Splits a conjunction into drivable atom work and residual checks.
  std::vector<PlanItem> planItems(const FOSentence* body) const {
    std::vector<const FOSentence*> conjuncts;
    std::function<void(const FOSentence*)> flatten = [&](const FOSentence* n) {
      if (n->kind() == FOSentence::Kind::And) {
        for (const FOPtr& c : n->children()) flatten(c.get());
      } else {
        conjuncts.push_back(n);
      }
    };
    flatten(body);

    std::vector<PlanItem> items;
    for (const FOSentence* n : conjuncts) {
      PlanItem item;
      if (n->kind() == FOSentence::Kind::Atom) {
        item.kind = PlanItem::Kind::SingleAtom;
        item.patterns.push_back(AtomPattern{&n->atom(), {}});
      } else if (n->kind() == FOSentence::Kind::Or && allAtomShaped(n)) {
        item.kind = PlanItem::Kind::AtomChoices;
        for (const FOPtr& c : n->children()) {
          item.patterns.push_back(toPattern(c.get()));
        }
      } else {
        item.kind = PlanItem::Kind::Residual;
        item.residual = n;
      }
      items.push_back(std::move(item));
    }
    return items;
  }

  static bool allAtomShaped(const FOSentence* orNode) {
    for (const FOPtr& c : orNode->children()) {
      const FOSentence* n = c.get();
      if (n->kind() == FOSentence::Kind::Atom) continue;
      if (n->kind() == FOSentence::Kind::Exists &&
          n->body()->kind() == FOSentence::Kind::Atom) {
        continue;
      }
      return false;
    }
    return true;
  }

  static AtomPattern toPattern(const FOSentence* n) {
    if (n->kind() == FOSentence::Kind::Atom) return AtomPattern{&n->atom(), {}};
    AtomPattern p{&n->body()->atom(), {}};
    p.wildcards.insert(n->vars().begin(), n->vars().end());
    return p;
  }

  // How many argument positions of the pattern are already determined.
  std::size_t boundness(const AtomPattern& p, const Env& env) const {
    std::size_t n = 0;
    for (const Term& t : p.atom->args) {
      if (t.kind == TermKind::Constant || env.count(t.name) > 0 ||
          p.wildcards.count(t.name) > 0) {
        ++n;
      }
    }
    return n;
  }

  // Backtracking search over the drivable items; residuals and
  // still-unbound open variables are handled once all drivers are placed.
  bool search(const std::vector<PlanItem>& items, std::vector<bool>& done,
              const std::vector<std::string>& open, Env& env,
              const std::function<bool(Env&)>& onSolution) {
    // Pick the most-constrained pending driver.
    std::size_t best = items.size();
    std::size_t bestScore = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (done[i] || items[i].kind == PlanItem::Kind::Residual) continue;
      std::size_t score = 0;
      for (const AtomPattern& p : items[i].patterns) {
        score = std::max(score, boundness(p, env));
      }
      if (best == items.size() || score > bestScore) {
        best = i;
        bestScore = score;
      }
    }

    if (best == items.size()) {
      return finishLeaf(items, open, 0, env, onSolution);
    }

    done[best] = true;
    bool stopped = false;
    for (const AtomPattern& p : items[best].patterns) {
      const std::vector<std::size_t>& rows = abox_.withPredicate(p.atom->pred);
      for (std::size_t row : rows) {
        const Atom& fact = abox_.atoms()[row];
        if (fact.args.size() != p.atom->args.size()) continue;
        std::vector<std::string> newlyBound;
        if (!matchAtom(*p.atom, p.wildcards, fact, env, newlyBound)) {
          for (const std::string& v : newlyBound) env.erase(v);
          continue;
        }
        stopped = search(items, done, open, env, onSolution);
        for (const std::string& v : newlyBound) env.erase(v);
        if (stopped) break;
      }
      if (stopped) break;
    }
    done[best] = false;
    return stopped;
  }

  // Unifies the pattern with a ground fact, extending env; records the
  // variables it bound so the caller can undo them.
  bool matchAtom(const Atom& pattern, const std::set<std::string>& wildcards,
                 const Atom& fact, Env& env,
                 std::vector<std::string>& newlyBound) const {
    // Wildcards are per-occurrence only when they appear once; a repeated
    // wildcard must still match consistently, so track them locally.
    std::map<std::string, std::string> local;
    for (std::size_t k = 0; k < pattern.args.size(); ++k) {
      const Term& t = pattern.args[k];
      const std::string& value = fact.args[k].name;
      if (t.kind == TermKind::Constant) {
        if (t.name != value) return false;
        continue;
      }
      if (wildcards.count(t.name) > 0) {
        auto [it, inserted] = local.emplace(t.name, value);
        if (!inserted && it->second != value) return false;
        continue;
      }
      auto it = env.find(t.name);
      if (it != env.end()) {
        if (it->second != value) return false;
      } else {
        env.emplace(t.name, value);
        newlyBound.push_back(t.name);
      }
    }
    return true;
  }

  // All drivers placed: run the open variables that remain unbound over the
  // active domain, then check the residual conjuncts.
  bool finishLeaf(const std::vector<PlanItem>& items,
                  const std::vector<std::string>& open, std::size_t fromVar,
                  Env& env, const std::function<bool(Env&)>& onSolution) {
    for (std::size_t k = fromVar; k < open.size(); ++k) {
      if (env.count(open[k]) > 0) continue;
      for (const std::string& c : domain_) {
        env[open[k]] = c;
        bool stopped = finishLeaf(items, open, k + 1, env, onSolution);
        env.erase(open[k]);
        if (stopped) return true;
      }
      return false;  // empty domain, or no assignment worked
    }
    for (const PlanItem& item : items) {
      if (item.kind != PlanItem::Kind::Residual) continue;
      if (!eval(item.residual, env)) return false;
    }
    return onSolution(env);
  }

  const ABox& abox_;
  std::vector<std::string> domain_;
};

}  // namespace

bool evalFO(const FOPtr& phi, const ABox& abox) {
  Evaluator ev(abox, phi);
  return ev.evalClosed(phi);
}

std::vector<Binding> evalBindings(const FOPtr& psi,
                                  const std::vector<std::string>& freeVars,
                                  const ABox& abox) {
  Evaluator ev(abox, psi);
  std::set<std::vector<std::string>> tuples;
  ev.enumerateSolutions(psi, freeVars, [&](const Env& env) {
    std::vector<std::string> tuple;
    tuple.reserve(freeVars.size());
    for (const std::string& v : freeVars) {
      auto it = env.find(v);
      if (it == env.end()) {
        throw CqeError("binding enumeration left ?" + v + " unbound");
      }
      tuple.push_back(it->second);
    }
    tuples.insert(std::move(tuple));
  });
  std::vector<Binding> out;
  out.reserve(tuples.size());
  for (const std::vector<std::string>& tuple : tuples) {
    Binding b;
    for (std::size_t k = 0; k < freeVars.size(); ++k) b[freeVars[k]] = tuple[k];
    out.push_back(std::move(b));
  }
  return out;
}

ABox closure(const TBox& tbox, const ABox& abox) {
  if (!isConsistent(tbox, abox)) {
    throw InconsistentInstance("closure requires a consistent TBox and ABox");
  }
  // Signature: predicates of the ABox plus every name used by the TBox.
  std::map<std::string, std::size_t> arity;
  for (const Atom& a : abox.atoms()) arity[a.pred] = a.args.size();
  for (const TBoxAxiom& ax : tbox.axioms) {
    for (const BasicConceptOrRole* side : {&ax.lhs, &ax.rhs}) {
      arity[side->name] = side->kind == BasicKind::AtomicConcept ? 1 : 2;
    }
  }

  const std::vector<std::string>& consts = abox.constants();
  std::vector<Atom> entailed = abox.atoms();
  auto tryAtom = [&](Atom candidate) {
    if (abox.contains(candidate)) return;  // already present
    BUCQ atomic{BCQ({candidate})};
    if (evalFO(toSentence(perfectRef(atomic, tbox)), abox)) {
      entailed.push_back(std::move(candidate));
    }
  };
  for (const auto& [pred, n] : arity) {
    if (n == 1) {
      for (const std::string& c : consts) tryAtom(Atom{pred, {constant(c)}});
    } else {
      for (const std::string& c : consts) {
        for (const std::string& d : consts) {
          tryAtom(Atom{pred, {constant(c), constant(d)}});
        }
      }
    }
  }
  return ABox(std::move(entailed));
}

std::vector<ABox> findImages(const BUCQ& q, const ABox& abox) {
  // Every minimal satisfying subset is the atom image of some satisfying
  // binding of a disjunct, so enumerate those and keep the minimal ones.
  std::set<std::vector<std::string>> seen;
  std::vector<std::vector<Atom>> witnesses;
  for (const BCQ& d : q.disjuncts) {
    std::vector<FOPtr> atomSentences;
    for (const Atom& a : d.atoms()) atomSentences.push_back(foAtom(a));
    FOPtr body = foAnd(std::move(atomSentences));
    std::vector<std::string> freeVars = d.variableOrder();
    for (const Binding& b : evalBindings(body, freeVars, abox)) {
      Subst subst;
      for (const auto& [v, c] : b) subst[v] = constant(c);
      std::vector<Atom> image;
      for (const Atom& a : d.atoms()) image.push_back(applySubst(subst, a));
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      std::vector<std::string> key;
      for (const Atom& a : image) key.push_back(renderAtom(a));
      if (seen.insert(key).second) witnesses.push_back(std::move(image));
    }
  }

  auto isSubset = [](const std::vector<Atom>& a, const std::vector<Atom>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<std::vector<Atom>> minimal;
  for (const std::vector<Atom>& w : witnesses) {
    bool dominated = false;
    for (const std::vector<Atom>& other : witnesses) {
      if (other.size() < w.size() && isSubset(other, w)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(w);
  }
  std::sort(minimal.begin(), minimal.end(),
            [](const std::vector<Atom>& a, const std::vector<Atom>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  std::vector<ABox> out;
  out.reserve(minimal.size());
  for (std::vector<Atom>& m : minimal) out.emplace_back(std::move(m));
  return out;
}

bool isConsistent(const TBox& tbox, const ABox& abox) {
  std::optional<BUCQ> uq = unsatQuery(tbox);
  if (!uq) return true;
  return !evalFO(toSentence(perfectRef(*uq, tbox)), abox);
}

bool isPolicyConsistentWith(const CQESpec& spec, const ABox& censor) {
  std::optional<BUCQ> pq = policyQuery(spec.policy);
  if (!pq) return true;
  return !evalFO(toSentence(perfectRef(*pq, spec.tbox)), censor);
}

}  // namespace cqe
