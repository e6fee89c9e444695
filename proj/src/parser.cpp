// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include "cqe/parser.h"

#include <cctype>
#include <sstream>
#include <vector>

namespace cqe {

void Signature::use(const std::string& pred, std::size_t arity, int line,
                    int column) {
  auto it = arities_.find(pred);
  if (it == arities_.end()) {
    arities_[pred] = arity;
  } else if (it->second != arity) {
    throw SourceError(line, column,
                      "predicate '" + pred + "' used with arity " +
                          std::to_string(arity) + " but previously with arity " +
                          std::to_string(it->second));
  }
}

std::size_t Signature::arityOf(const std::string& pred) const {
  auto it = arities_.find(pred);
  return it == arities_.end() ? 0 : it->second;
}

namespace {

// Character scanner over one line of input, tracking 1-based columns.
class LineScanner {
 public:
  LineScanner(const std::string& text, int line) : text_(text), line_(line) {}

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool atEnd() {
    skipSpace();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  int column() const { return static_cast<int>(pos_) + 1; }
  int line() const { return line_; }

  char peek() {
    skipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!consume(c)) {
      throw SourceError(line_, column(), "expected '" + std::string(1, c) + "' " + what);
    }
  }

  // Reads an identifier [A-Za-z][A-Za-z0-9_]*; empty string if none.
  std::string tryIdent() {
    skipSpace();
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    return text_.substr(start, pos_ - start);
  }

  std::string ident(const std::string& what) {
    skipSpace();
    int col = column();
    std::string id = tryIdent();
    if (id.empty()) throw SourceError(line_, col, "expected identifier " + what);
    return id;
  }

  void expectEnd() {
    if (!atEnd()) {
      throw SourceError(line_, column(), "unexpected trailing input");
    }
  }

 private:
  const std::string& text_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<std::pair<int, std::string>> nonCommentLines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    LineScanner probe(line, no);
    if (!probe.atEnd()) out.emplace_back(no, line);
  }
  return out;
}

// term := ?ident | ident
Term parseTermAt(LineScanner& s) {
  if (s.consume('?')) {
    return variable(s.ident("after '?'"));
  }
  return constant(s.ident("as term"));
}

// atom := ident '(' term (',' term)* ')'
Atom parseAtomAt(LineScanner& s, Signature* sig, bool requireGround) {
  s.skipSpace();
  int col = s.column();
  std::string pred = s.ident("as predicate name");
  s.expect('(', "after predicate name");
  std::vector<Term> args;
  do {
    s.skipSpace();
    int argCol = s.column();
    Term t = parseTermAt(s);
    if (requireGround && t.isVariable()) {
      throw SourceError(s.line(), argCol, "variable not allowed in a ground atom");
    }
    args.push_back(std::move(t));
  } while (s.consume(','));
  s.expect(')', "to close the atom");
  if (args.size() < 1 || args.size() > 2) {
    throw SourceError(s.line(), col,
                      "predicate '" + pred + "' has arity " + std::to_string(args.size()) +
                          "; only arity 1 (concept) or 2 (role) is supported");
  }
  if (sig) sig->use(pred, args.size(), s.line(), col);
  return Atom{pred, std::move(args)};
}

bool isReservedWord(const std::string& id) {
  return id == "ISA" || id == "ISAR" || id == "NOT" || id == "EX" ||
         id == "DENY" || id == "ASK" || id == "OR" || id == "TRUE" ||
         id == "FALSE";
}

// One side of an axiom before we know the axiom's shape:
//   EX ident[-]  -> concept-shaped (exists over a role)
//   ident-       -> role-shaped (inverse role)
//   ident        -> atomic concept or direct role, settled by the keyword
struct RawSide {
  enum class Shape { Exists, Inverse, Bare } shape;
  std::string name;
  bool existsInverse = false;
  int line;
  int column;
};

RawSide parseRawSide(LineScanner& s) {
  s.skipSpace();
  RawSide side{RawSide::Shape::Bare, "", false, s.line(), s.column()};
  std::string id = s.ident("as axiom side");
  if (id == "EX") {
    side.shape = RawSide::Shape::Exists;
    s.skipSpace();
    side.column = s.column();
    side.name = s.ident("after EX");
    side.existsInverse = s.consume('-');
  } else {
    if (isReservedWord(id)) {
      throw SourceError(side.line, side.column, "'" + id + "' is a reserved word");
    }
    side.name = id;
    side.shape = s.consume('-') ? RawSide::Shape::Inverse : RawSide::Shape::Bare;
  }
  return side;
}

BasicConceptOrRole resolveSide(const RawSide& raw, bool roleAxiom, Signature* sig) {
  if (raw.shape == RawSide::Shape::Exists) {
    if (roleAxiom) {
      throw SourceError(raw.line, raw.column, "EX sides belong to ISA axioms, not ISAR");
    }
    if (sig) sig->use(raw.name, 2, raw.line, raw.column);
    return BasicConceptOrRole{
        raw.existsInverse ? BasicKind::ExistsInverseRole : BasicKind::ExistsRole, raw.name};
  }
  if (raw.shape == RawSide::Shape::Inverse) {
    if (!roleAxiom) {
      throw SourceError(raw.line, raw.column,
                        "inverse roles belong to ISAR axioms, not ISA");
    }
    if (sig) sig->use(raw.name, 2, raw.line, raw.column);
    return BasicConceptOrRole{BasicKind::InverseRole, raw.name};
  }
  if (roleAxiom) {
    if (sig) sig->use(raw.name, 2, raw.line, raw.column);
    return BasicConceptOrRole{BasicKind::Role, raw.name};
  }
  if (sig) sig->use(raw.name, 1, raw.line, raw.column);
  return BasicConceptOrRole{BasicKind::AtomicConcept, raw.name};
}

}  // namespace

TBox parseTBox(const std::string& text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  TBox tbox;
  for (const auto& [no, line] : nonCommentLines(text)) {
    LineScanner s(line, no);
    RawSide lhs = parseRawSide(s);
    s.skipSpace();
    int kwCol = s.column();
    std::string kw = s.ident("ISA or ISAR");
    if (kw != "ISA" && kw != "ISAR") {
      throw SourceError(no, kwCol, "expected ISA or ISAR, got '" + kw + "'");
    }
    bool roleAxiom = kw == "ISAR";
    TBoxAxiom ax;
    s.skipSpace();
    // Peek for the NOT keyword marking a negative inclusion.
    bool negated = false;
    {
      LineScanner probe = s;
      std::string maybeNot = probe.tryIdent();
      if (maybeNot == "NOT") {
        negated = true;
        s.ident("NOT");
      }
    }
    RawSide rhs = parseRawSide(s);
    s.expectEnd();
    ax.lhs = resolveSide(lhs, roleAxiom, sig);
    ax.rhs = resolveSide(rhs, roleAxiom, sig);
    ax.negated = negated;
    bool dup = false;
    for (const TBoxAxiom& seen : tbox.axioms) {
      if (seen == ax) {
        dup = true;
        break;
      }
    }
    if (!dup) tbox.axioms.push_back(ax);
  }
  return tbox;
}

ABox parseABox(const std::string& text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  std::vector<Atom> atoms;
  for (const auto& [no, line] : nonCommentLines(text)) {
    LineScanner s(line, no);
    atoms.push_back(parseAtomAt(s, sig, /*requireGround=*/true));
    s.expectEnd();
  }
  return ABox(std::move(atoms));
}

Policy parsePolicy(const std::string& text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  Policy policy;
  for (const auto& [no, line] : nonCommentLines(text)) {
    LineScanner s(line, no);
    std::string kw = s.ident("DENY");
    if (kw != "DENY") throw SourceError(no, s.column(), "expected DENY");
    if (s.atEnd()) throw SourceError(no, s.column(), "denial needs at least one atom");
    std::vector<Atom> atoms;
    do {
      atoms.push_back(parseAtomAt(s, sig, /*requireGround=*/false));
    } while (s.consume(','));
    s.expectEnd();
    policy.denials.push_back(BCQ(std::move(atoms)));
  }
  return policy;
}

BUCQ parseBUCQ(const std::string& text, Signature* sig) {
  Signature local;
  if (!sig) sig = &local;
  auto lines = nonCommentLines(text);
  if (lines.empty()) throw SourceError(1, 1, "expected an ASK query");
  if (lines.size() > 1) {
    throw SourceError(lines[1].first, 1, "a query is a single ASK line");
  }
  const auto& [no, line] = lines[0];
  LineScanner s(line, no);
  std::string kw = s.ident("ASK");
  if (kw != "ASK") throw SourceError(no, s.column(), "expected ASK");
  std::vector<BCQ> disjuncts;
  for (;;) {
    if (s.atEnd()) throw SourceError(no, s.column(), "query needs at least one atom");
    std::vector<Atom> atoms;
    atoms.push_back(parseAtomAt(s, sig, /*requireGround=*/false));
    for (;;) {
      if (s.consume(',')) {
        atoms.push_back(parseAtomAt(s, sig, /*requireGround=*/false));
        continue;
      }
      break;
    }
    disjuncts.push_back(BCQ(std::move(atoms)));
    if (s.atEnd()) break;
    std::string orKw = s.ident("OR");
    if (orKw != "OR") throw SourceError(no, s.column(), "expected OR between disjuncts");
  }
  return BUCQ(std::move(disjuncts));
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

namespace {

std::string renderSide(const BasicConceptOrRole& b) {
  switch (b.kind) {
    case BasicKind::AtomicConcept:
      return b.name;
    case BasicKind::ExistsRole:
      return "EX " + b.name;
    case BasicKind::ExistsInverseRole:
      return "EX " + b.name + "-";
    case BasicKind::Role:
      return b.name;
    case BasicKind::InverseRole:
      return b.name + "-";
  }
  return b.name;
}

std::string renderAtomList(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ", ";
    out += renderAtom(atoms[i]);
  }
  return out;
}

}  // namespace

std::string renderTBox(const TBox& tbox) {
  std::string out;
  for (const TBoxAxiom& ax : tbox.axioms) {
    out += renderSide(ax.lhs);
    out += ax.lhs.isRoleShaped() ? " ISAR " : " ISA ";
    if (ax.negated) out += "NOT ";
    out += renderSide(ax.rhs);
    out += "\n";
  }
  return out;
}

std::string renderABox(const ABox& abox) {
  std::string out;
  for (const Atom& a : abox.atoms()) {
    out += renderAtom(a);
    out += "\n";
  }
  return out;
}

std::string renderPolicy(const Policy& policy) {
  std::string out;
  for (const BCQ& d : policy.denials) {
    out += "DENY " + renderAtomList(d.atoms()) + "\n";
  }
  return out;
}

std::string renderBUCQ(const BUCQ& q) {
  std::string out = "ASK ";
  for (std::size_t i = 0; i < q.disjuncts.size(); ++i) {
    if (i > 0) out += " OR ";
    out += renderAtomList(q.disjuncts[i].atoms());
  }
  return out;
}

std::string renderFO(const FOPtr& phi) {
  switch (phi->kind()) {
    case FOSentence::Kind::True:
      return "TRUE";
    case FOSentence::Kind::False:
      return "FALSE";
    case FOSentence::Kind::Atom:
      return renderAtom(phi->atom());
    case FOSentence::Kind::Eq:
      return "(= " + renderTerm(phi->left()) + " " + renderTerm(phi->right()) + ")";
    case FOSentence::Kind::Not:
      return "(NOT " + renderFO(phi->children()[0]) + ")";
    case FOSentence::Kind::And:
    case FOSentence::Kind::Or: {
      std::string out = phi->kind() == FOSentence::Kind::And ? "(AND" : "(OR";
      for (const FOPtr& c : phi->children()) {
        out += " " + renderFO(c);
      }
      return out + ")";
    }
    case FOSentence::Kind::Exists: {
      std::string out = "(EXISTS (";
      for (std::size_t i = 0; i < phi->vars().size(); ++i) {
        if (i > 0) out += " ";
        out += "?" + phi->vars()[i];
      }
      return out + ") " + renderFO(phi->body()) + ")";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// parseFO
// ---------------------------------------------------------------------------

namespace {

// Multi-line scanner for the s-expression grammar.
class FOScanner {
 public:
  explicit FOScanner(const std::string& text) : text_(text) {}

  void skipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') {
          ++line_;
          lineStart_ = pos_ + 1;
        }
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool atEnd() {
    skipSpace();
    return pos_ >= text_.size();
  }

  int line() const { return line_; }
  int column() const { return static_cast<int>(pos_ - lineStart_) + 1; }

  char peek() {
    skipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char peekRaw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool consume(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!consume(c)) {
      throw SourceError(line_, column(), "expected '" + std::string(1, c) + "' " + what);
    }
  }

  std::string tryIdent() {
    skipSpace();
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    return text_.substr(start, pos_ - start);
  }

  std::string ident(const std::string& what) {
    skipSpace();
    int l = line_, c = column();
    std::string id = tryIdent();
    if (id.empty()) throw SourceError(l, c, "expected identifier " + what);
    return id;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t lineStart_ = 0;
  int line_ = 1;
};

Term parseFOTerm(FOScanner& s) {
  if (s.consume('?')) return variable(s.ident("after '?'"));
  return constant(s.ident("as term"));
}

FOPtr parseFOFormula(FOScanner& s) {
  s.skipSpace();
  int line = s.line(), col = s.column();
  if (s.peek() == '(') {
    s.consume('(');
    if (s.peek() == '=') {
      s.consume('=');
      Term l = parseFOTerm(s);
      Term r = parseFOTerm(s);
      s.expect(')', "to close the equality");
      return foEq(std::move(l), std::move(r));
    }
    std::string op = s.ident("as connective");
    if (op == "NOT") {
      FOPtr child = parseFOFormula(s);
      s.expect(')', "to close NOT");
      return foNot(std::move(child));
    }
    if (op == "AND" || op == "OR") {
      std::vector<FOPtr> children;
      while (s.peek() != ')') {
        if (s.atEnd()) throw SourceError(s.line(), s.column(), "unterminated " + op);
        children.push_back(parseFOFormula(s));
      }
      s.consume(')');
      if (children.empty()) {
        throw SourceError(line, col, op + " requires at least one child");
      }
      return op == "AND" ? foAnd(std::move(children)) : foOr(std::move(children));
    }
    if (op == "EXISTS") {
      s.expect('(', "to open the variable list");
      std::vector<std::string> vars;
      while (s.peek() == '?') {
        s.consume('?');
        vars.push_back(s.ident("as quantified variable"));
      }
      s.expect(')', "to close the variable list");
      if (vars.empty()) {
        throw SourceError(line, col, "EXISTS requires at least one variable");
      }
      FOPtr body = parseFOFormula(s);
      s.expect(')', "to close EXISTS");
      return foExists(std::move(vars), std::move(body));
    }
    throw SourceError(line, col, "unknown connective '" + op + "'");
  }
  std::string id = s.ident("as formula");
  if (id == "TRUE") return foTrue();
  if (id == "FALSE") return foFalse();
  // An atom: predicate application.
  if (s.peekRaw() != '(') {
    throw SourceError(line, col, "expected '(' after predicate '" + id + "'");
  }
  s.consume('(');
  std::vector<Term> args;
  do {
    args.push_back(parseFOTerm(s));
  } while (s.consume(','));
  s.expect(')', "to close the atom");
  return foAtom(Atom{id, std::move(args)});
}

}  // namespace

FOPtr parseFO(const std::string& text) {
  FOScanner s(text);
  FOPtr phi = parseFOFormula(s);
  if (!s.atEnd()) {
    throw SourceError(s.line(), s.column(), "unexpected trailing input");
  }
  return phi;
}

}  // namespace cqe
