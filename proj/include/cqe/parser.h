// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.
//
// Bidirectional text formats. One grammar per artifact kind:
//
//   .tbox    one axiom per line:
//              side ISA [NOT] side        (concept inclusion)
//              role ISAR [NOT] role       (role inclusion)
//            where side = ident | EX ident | EX ident-   and
//                  role = ident | ident-
//   .abox    one ground atom per line, e.g.  buy(john, m_a)
//   .policy  one denial per line:  DENY atom, atom, ...
//   .bucq    a single query:       ASK bcq (OR bcq)*    bcq = atom, atom, ...
//
// Identifiers are [A-Za-z][A-Za-z0-9_]*, variables are written ?name,
// '#' starts a line comment, whitespace within a line is insignificant.
// FO sentences render to a canonical s-expression form (see renderFO).
//
// Every parse error carries a 1-based line/column position (SourceError).

#ifndef CQE_PARSER_H
#define CQE_PARSER_H

#include <map>
#include <string>

#include "cqe/core.h"

namespace cqe {

// Predicate arity bookkeeping. Concept and role predicates share one
// namespace and are told apart by arity of use; a use that conflicts with
// an earlier one (in any file loaded through the same signature) is an
// error at parse time.
class Signature {
 public:
  // Records that `pred` was used with `arity`; throws SourceError at the
  // given position if a different arity was recorded before.
  void use(const std::string& pred, std::size_t arity, int line, int column);

  // 0 when unknown, else the recorded arity.
  std::size_t arityOf(const std::string& pred) const;

  const std::map<std::string, std::size_t>& arities() const { return arities_; }

 private:
  std::map<std::string, std::size_t> arities_;
};

// Parsers. When `sig` is null a file-local signature is used, so arity
// conflicts within one text are still caught.
TBox parseTBox(const std::string& text, Signature* sig = nullptr);
ABox parseABox(const std::string& text, Signature* sig = nullptr);
Policy parsePolicy(const std::string& text, Signature* sig = nullptr);
BUCQ parseBUCQ(const std::string& text, Signature* sig = nullptr);

// Canonical renderers; parse(render(x)) reproduces x structurally (for a
// BCQ/BUCQ up to canonicalization, which parsing does not apply).
std::string renderTBox(const TBox& tbox);
std::string renderABox(const ABox& abox);
std::string renderPolicy(const Policy& policy);
std::string renderBUCQ(const BUCQ& q);

// Canonical s-expression rendering of an FO sentence, bit-exact:
//   TRUE | FALSE | pred(t,...) | (= t1 t2) | (NOT f) | (AND f ...) |
//   (OR f ...) | (EXISTS (?v ...) f)
// Children print in construction order, separated by single spaces;
// variables print with a '?' marker.
std::string renderFO(const FOPtr& phi);

// Inverse of renderFO on rendered output. Input built by hand is accepted
// too and goes through the normalizing constructors (so e.g. a single-child
// AND collapses); (AND) with no children is an error.
FOPtr parseFO(const std::string& text);

}  // namespace cqe

#endif  // CQE_PARSER_H
