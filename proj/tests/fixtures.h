// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Shared test fixtures: two small, fully worked instances whose censors,
// survivor sets, and answers are known by hand, plus helpers for comparing
// censor lists against expected atom sets.

#ifndef CQE_TESTS_FIXTURES_H
#define CQE_TESTS_FIXTURES_H

#include <set>
#include <string>
#include <vector>

#include "cqe/core.h"
#include "cqe/engine.h"
#include "cqe/parser.h"

namespace cqe::test {

struct Fixture {
  TBox tbox;
  Policy policy;
  ABox abox;
  std::vector<BUCQ> queries;

  CQEInstance instance() const { return CQEInstance{tbox, policy, abox}; }
};

// A pharmacy: one inclusion (a brand implies its drug class), two denials
// (nobody may be linked to an antiseizure purchase, directly or through the
// ingredient), four facts. Expected censor lattice, survivor counts along the
// three-query sequence, and answers TRUE/FALSE/TRUE are asserted all over the
// test suite.
inline Fixture pharmacyFixture() {
  Fixture f;
  Signature sig;
  f.tbox = parseTBox("Abc ISA Antiseizure\n", &sig);
  f.abox = parseABox(
      "buy(john, m_a)\n"
      "Abc(m_a)\n"
      "buy(alice, m_b)\n"
      "contain(m_b, phenytoin)\n",
      &sig);
  f.policy = parsePolicy(
      "DENY buy(?x, ?y), Antiseizure(?y)\n"
      "DENY buy(?x, ?y), contain(?y, phenytoin)\n",
      &sig);
  f.queries = {parseBUCQ("ASK buy(john, m_a)", &sig),
               parseBUCQ("ASK Abc(m_a)", &sig),
               parseBUCQ("ASK buy(?x, m_b)", &sig)};
  return f;
}

// Two individuals that each may be C or D but not both: an empty TBox, one
// denial forbidding the conjunction, and all four facts present. Exactly the
// four choice censors; asking "is anything a C" keeps the three censors
// holding a C-atom.
inline Fixture clashPairFixture() {
  Fixture f;
  Signature sig;
  f.tbox = parseTBox("", &sig);
  f.abox = parseABox("C(a1)\nC(a2)\nD(a1)\nD(a2)\n", &sig);
  f.policy = parsePolicy("DENY C(?x), D(?x)\n", &sig);
  f.queries = {parseBUCQ("ASK C(?x)", &sig)};
  return f;
}

// The rendered-atom key set of an ABox, for order-free comparisons.
inline std::set<std::string> atomKeys(const ABox& abox) {
  std::set<std::string> keys;
  for (const Atom& a : abox.atoms()) keys.insert(renderAtom(a));
  return keys;
}

// Censors as comparable sets of rendered atoms.
inline std::set<std::set<std::string>> censorKeySets(
    const std::vector<Censor>& censors) {
  std::set<std::set<std::string>> out;
  for (const Censor& c : censors) out.insert(atomKeys(c.atoms));
  return out;
}

// Parses a brace-free list of atoms ("buy(john,m_a); Abc(m_a)") into a key
// set, for writing expected censors compactly.
inline std::set<std::string> keysOf(const std::string& semicolonAtoms) {
  std::set<std::string> keys;
  std::size_t start = 0;
  while (start <= semicolonAtoms.size()) {
    std::size_t end = semicolonAtoms.find(';', start);
    std::string piece = end == std::string::npos
                            ? semicolonAtoms.substr(start)
                            : semicolonAtoms.substr(start, end - start);
    std::size_t b = piece.find_first_not_of(" \t");
    if (b != std::string::npos) {
      std::size_t e = piece.find_last_not_of(" \t");
      ABox one = parseABox(piece.substr(b, e - b + 1) + "\n");
      for (const Atom& a : one.atoms()) keys.insert(renderAtom(a));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return keys;
}

}  // namespace cqe::test

#endif  // CQE_TESTS_FIXTURES_H
