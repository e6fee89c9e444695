// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include <set>
#include <string>
#include <vector>

#include "cqe/core.h"
#include "cqe/errors.h"
#include "doctest.h"

using namespace cqe;

namespace {

Atom unary(const std::string& p, const Term& t) { return Atom{p, {t}}; }
Atom binary(const std::string& p, const Term& a, const Term& b) {
  return Atom{p, {a, b}};
}

}  // namespace

TEST_CASE("BCQ drops structural duplicates and rejects emptiness") {
  BCQ q({unary("A", constant("c")), unary("A", constant("c")),
         unary("B", constant("c"))});
  CHECK(q.atoms().size() == 2);
  CHECK_THROWS_AS(BCQ({}), CqeError);
}

TEST_CASE("BCQ variable order is first occurrence across atoms and args") {
  BCQ q({binary("r", variable("b"), variable("a")),
         binary("r", variable("a"), variable("c"))});
  CHECK(q.variableOrder() == std::vector<std::string>{"b", "a", "c"});
  CHECK(q.constants().empty());
}

TEST_CASE("canonicalBCQ is idempotent and atom-order-insensitive") {
  BCQ q1({binary("r", variable("x"), variable("y")),
          unary("A", variable("y"))});
  BCQ q2({unary("A", variable("w")),
          binary("r", variable("v"), variable("w"))});
  CHECK(canonKey(q1) == canonKey(q2));
  BCQ c = canonicalBCQ(q1);
  CHECK(canonicalBCQ(c) == c);
  for (const std::string& v : c.variableOrder()) {
    CHECK(v.front() == 'v');
  }
}

TEST_CASE("canonicalBCQ distinguishes different join shapes") {
  BCQ chain({binary("r", variable("x"), variable("y")),
             binary("r", variable("y"), variable("z"))});
  BCQ fork({binary("r", variable("x"), variable("y")),
            binary("r", variable("x"), variable("z"))});
  CHECK(canonKey(chain) != canonKey(fork));
}

TEST_CASE("renameApart leaves collision-free queries untouched") {
  BCQ q({binary("r", variable("x"), constant("c"))});
  BCQ renamed = renameApart(q, {"y", "z"});
  CHECK(renamed == q);
}

TEST_CASE("renameApart renames every variable on any collision") {
  BCQ q({binary("r", variable("x"), variable("y"))});
  BCQ renamed = renameApart(q, {"y", "v0"});
  std::vector<std::string> vars = renamed.variableOrder();
  REQUIRE(vars.size() == 2);
  CHECK(vars[0] == "v1");  // v0 is reserved, so the lowest unused index is 1
  CHECK(vars[1] == "v2");
}

TEST_CASE("conjoinBUCQs pairs disjuncts row-major and renames the right side") {
  BUCQ left({BCQ({unary("A", variable("x"))}), BCQ({unary("B", variable("x"))})});
  BUCQ right({BCQ({unary("C", variable("x"))}), BCQ({unary("D", variable("x"))})});
  BUCQ product = conjoinBUCQs(left, right, 16);
  REQUIRE(product.disjuncts.size() == 4);
  CHECK(product.disjuncts[0].atoms()[0].pred == "A");
  CHECK(product.disjuncts[0].atoms()[1].pred == "C");
  CHECK(product.disjuncts[1].atoms()[1].pred == "D");
  CHECK(product.disjuncts[2].atoms()[0].pred == "B");
  // The right-hand variables were renamed apart: the pair is a cross product,
  // not a join.
  CHECK(product.disjuncts[0].variableOrder().size() == 2);
}

TEST_CASE("conjoinBUCQs rejects products beyond the cap") {
  std::vector<BCQ> many;
  for (int i = 0; i < 10; ++i) {
    many.push_back(BCQ({unary("A" + std::to_string(i), variable("x"))}));
  }
  BUCQ wide(many);
  CHECK_THROWS_AS(conjoinBUCQs(wide, wide, 99), CapacityExceeded);
  CHECK_NOTHROW(conjoinBUCQs(wide, wide, 100));
}

TEST_CASE("ABox sorts, deduplicates, and requires ground atoms") {
  ABox abox({binary("r", constant("b"), constant("a")),
             unary("A", constant("z")),
             unary("A", constant("z"))});
  REQUIRE(abox.size() == 2);
  CHECK(abox.atoms()[0].pred == "A");
  CHECK(abox.atoms()[1].pred == "r");
  CHECK(abox.contains(unary("A", constant("z"))));
  CHECK_FALSE(abox.contains(unary("A", constant("y"))));
  CHECK(abox.constants() == std::vector<std::string>{"a", "b", "z"});
  CHECK(abox.withPredicate("r").size() == 1);
  CHECK(abox.withPredicate("missing").empty());
  CHECK_THROWS_AS(ABox({unary("A", variable("x"))}), CqeError);
}

TEST_CASE("smart constructors fold constants") {
  FOPtr t = foTrue();
  FOPtr f = foFalse();
  FOPtr a = foAtom(unary("A", constant("c")));

  CHECK(foNot(t)->kind() == FOSentence::Kind::False);
  CHECK(foNot(f)->kind() == FOSentence::Kind::True);
  CHECK(foNot(foNot(a))->kind() == FOSentence::Kind::Not);

  CHECK(foAnd({})->kind() == FOSentence::Kind::True);
  CHECK(foAnd({a, f})->kind() == FOSentence::Kind::False);
  CHECK(structurallyEqual(foAnd({t, a}), a));
  CHECK(foOr({})->kind() == FOSentence::Kind::False);
  CHECK(foOr({a, t})->kind() == FOSentence::Kind::True);
  CHECK(structurallyEqual(foOr({f, a}), a));

  CHECK(structurallyEqual(foExists({}, a), a));
  CHECK(foExists({"x"}, f)->kind() == FOSentence::Kind::False);
  // EXISTS over TRUE must survive: it is false on an empty active domain.
  CHECK(foExists({"x"}, t)->kind() == FOSentence::Kind::Exists);
}

TEST_CASE("toSentence quantifies each disjunct over its own variables") {
  BUCQ q({BCQ({binary("r", variable("x"), constant("c"))}),
          BCQ({unary("A", constant("d"))})});
  FOPtr phi = toSentence(q);
  REQUIRE(phi->kind() == FOSentence::Kind::Or);
  CHECK(phi->children()[0]->kind() == FOSentence::Kind::Exists);
  CHECK(phi->children()[0]->vars() == std::vector<std::string>{"x"});
  CHECK(phi->children()[1]->kind() == FOSentence::Kind::Atom);
  std::set<std::string> consts = sentenceConstants(phi);
  CHECK(consts == std::set<std::string>{"c", "d"});
}

TEST_CASE("applySubst touches only mapped variables") {
  Subst s{{"x", constant("c")}};
  Atom a = applySubst(s, binary("r", variable("x"), variable("y")));
  CHECK(a.args[0] == constant("c"));
  CHECK(a.args[1] == variable("y"));
}
