#include "setproof/syntax.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "setproof/error.hpp"

namespace setproof {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident,
  Forall,
  Exists,
  ExistsUnique,
  In,
  Sub,
  Eq,
  Union,
  Inter,
  Diff,
  Pow,
  FamUnion,
  FamInter,
  Contra,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Not,
  And,
  Or,
  Implies,
  Iff,
  End,
};

struct Token {
  Tok type;
  std::string text;
  std::size_t offset;  // 1-based
};

std::string describe(const Token& t) {
  if (t.type == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
  throw Error(ErrorCode::ParseError, "offset " + std::to_string(offset) + ": " + what, offset);
}

std::optional<Tok> keyword(std::string_view word) {
  if (word == "forall") return Tok::Forall;
  if (word == "exists") return Tok::Exists;
  if (word == "in") return Tok::In;
  if (word == "sub") return Tok::Sub;
  if (word == "union") return Tok::Union;
  if (word == "inter") return Tok::Inter;
  if (word == "pow") return Tok::Pow;
  if (word == "Union") return Tok::FamUnion;
  if (word == "Inter") return Tok::FamInter;
  if (word == "contra") return Tok::Contra;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok type, std::size_t start, std::size_t len) {
    out.push_back({type, std::string(src.substr(start, len)), start + 1});
    i = start + len;
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
      }
      std::string_view word = src.substr(start, i - start);
      auto kw = keyword(word);
      if (kw == Tok::Exists && i < src.size() && src[i] == '!') {
        push(Tok::ExistsUnique, start, i - start + 1);
      } else {
        push(kw.value_or(Tok::Ident), start, i - start);
      }
      continue;
    }
    std::string_view rest = src.substr(i);
    if (rest.starts_with("<->")) {
      push(Tok::Iff, i, 3);
    } else if (rest.starts_with("->")) {
      push(Tok::Implies, i, 2);
    } else {
      switch (c) {
        case '(': push(Tok::LParen, i, 1); break;
        case ')': push(Tok::RParen, i, 1); break;
        case '{': push(Tok::LBrace, i, 1); break;
        case '}': push(Tok::RBrace, i, 1); break;
        case ',': push(Tok::Comma, i, 1); break;
        case '~': push(Tok::Not, i, 1); break;
        case '&': push(Tok::And, i, 1); break;
        case '|': push(Tok::Or, i, 1); break;
        case '=': push(Tok::Eq, i, 1); break;
        case '\\': push(Tok::Diff, i, 1); break;
        default:
          fail(i + 1, "unexpected character '" + std::string(1, src[i]) + "'");
      }
    }
  }
  out.push_back({Tok::End, "", src.size() + 1});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Formula formula_to_end() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term term_to_end() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok t) const { return peek().type == t; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void expected(const std::string& what) const {
    fail(peek().offset, "expected " + what + ", found " + describe(peek()));
  }

  void expect(Tok t, const std::string& what) {
    if (!at(t)) expected(what);
    advance();
  }

  void expect_end() {
    if (!at(Tok::End)) expected("end of input");
  }

  Formula formula() { return iff(); }

  Formula iff() {
    Formula f = imp();
    while (at(Tok::Iff)) {
      advance();
      f = Formula::iff(f, imp());
    }
    return f;
  }

  Formula imp() {
    Formula f = disj();
    if (at(Tok::Implies)) {
      advance();
      return Formula::implies(f, imp());
    }
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (at(Tok::Or)) {
      advance();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (at(Tok::And)) {
      advance();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    switch (peek().type) {
      case Tok::Not:
        advance();
        return Formula::negation(unary());
      case Tok::Forall:
      case Tok::Exists:
      case Tok::ExistsUnique: {
        Tok q = advance().type;
        if (!at(Tok::Ident)) expected("identifier");
        VarName v = advance().text;
        if (at(Tok::Comma)) advance();
        Formula body = formula();
        auto kind = q == Tok::Forall   ? Formula::Kind::ForAll
                    : q == Tok::Exists ? Formula::Kind::Exists
                                       : Formula::Kind::ExistsUnique;
        return Formula::quantifier(kind, std::move(v), std::move(body));
      }
      default:
        return atom();
    }
  }

  // Index of the token closing the parenthesis at `open`, if any.
  std::optional<std::size_t> matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      if (toks_[i].type == Tok::LParen) ++depth;
      if (toks_[i].type == Tok::RParen && --depth == 0) return i;
    }
    return std::nullopt;
  }

  static bool continues_term(Tok t) {
    return t == Tok::In || t == Tok::Sub || t == Tok::Eq || t == Tok::Union || t == Tok::Inter ||
           t == Tok::Diff;
  }

  Formula atom() {
    if (at(Tok::Contra)) {
      advance();
      return Formula::contradiction();
    }
    if (at(Tok::LParen)) {
      // A parenthesized formula is never followed by a relation or a set
      // operator; a parenthesized term at atom start always is.
      auto close = matching_paren(pos_);
      bool term_group = close && continues_term(toks_[*close + 1].type);
      if (!term_group) {
        advance();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
    }
    Term lhs = term();
    Formula::Kind rel;
    switch (peek().type) {
      case Tok::In: rel = Formula::Kind::In; break;
      case Tok::Sub: rel = Formula::Kind::Subset; break;
      case Tok::Eq: rel = Formula::Kind::Eq; break;
      default: expected("'in', 'sub' or '='");
    }
    advance();
    return Formula::relation(rel, std::move(lhs), term());
  }

  Term term() {
    Term t = factor();
    while (true) {
      Term::Kind op;
      switch (peek().type) {
        case Tok::Union: op = Term::Kind::Union; break;
        case Tok::Inter: op = Term::Kind::Inter; break;
        case Tok::Diff: op = Term::Kind::Diff; break;
        default: return t;
      }
      advance();
      t = Term::binary(op, t, factor());
    }
  }

  Term factor() {
    switch (peek().type) {
      case Tok::Ident:
        return Term::var(advance().text);
      case Tok::LBrace:
        advance();
        expect(Tok::RBrace, "'}'");
        return Term::empty();
      case Tok::Pow:
      case Tok::FamUnion:
      case Tok::FamInter: {
        Tok op = advance().type;
        expect(Tok::LParen, "'('");
        Term inner = term();
        expect(Tok::RParen, "')'");
        auto kind = op == Tok::Pow        ? Term::Kind::Pow
                    : op == Tok::FamUnion ? Term::Kind::FamUnion
                                          : Term::Kind::FamInter;
        return Term::unary(kind, std::move(inner));
      }
      case Tok::LParen: {
        advance();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        expected("a set term");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Renderer

enum class TokClass { Connective, Quantifier, Variable, SetOp, Relation, Punct };

const char* class_name(TokClass c) {
  switch (c) {
    case TokClass::Connective: return "connective";
    case TokClass::Quantifier: return "quantifier";
    case TokClass::Variable: return "variable";
    case TokClass::SetOp: return "set-op";
    case TokClass::Relation: return "relation";
    case TokClass::Punct: return "punct";
  }
  return "punct";
}

constexpr int kPrecIff = 1;
constexpr int kPrecImp = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecUnary = 5;

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Iff: return kPrecIff;
    case Formula::Kind::Implies: return kPrecImp;
    case Formula::Kind::Or: return kPrecOr;
    case Formula::Kind::And: return kPrecAnd;
    default: return kPrecUnary;
  }
}

class Renderer {
 public:
  explicit Renderer(Style style) : style_(style) {}

  std::string take() { return std::move(out_); }

  // `rightmost` is false when more input follows this node inside the same
  // parenthesis level; quantifiers then need parentheses since their scope
  // would otherwise swallow the rest.
  void formula(const Formula& f, int min_prec, bool rightmost, Path& path) {
    bool parens = precedence(f) < min_prec || (f.is_quantifier() && !rightmost);
    if (parens) {
      punct("(", path);
      formula(f, 0, true, path);
      punct(")", path);
      return;
    }
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::In:
      case K::Subset:
      case K::Eq: {
        path.push_back(0);
        term(f.lhs_term(), path);
        space();
        const char* ascii = f.kind() == K::In ? "in" : f.kind() == K::Subset ? "sub" : "=";
        const char* uni = f.kind() == K::In ? "∈" : f.kind() == K::Subset ? "⊆" : "=";
        path.pop_back();
        token(ascii, uni, TokClass::Relation, path);
        space();
        path.push_back(1);
        term(f.rhs_term(), path);
        path.pop_back();
        break;
      }
      case K::Contradiction:
        token("contra", "⊥", TokClass::Connective, path);
        break;
      case K::Not:
        token("~", "¬", TokClass::Connective, path);
        path.push_back(0);
        formula(f.sub(0), kPrecUnary, rightmost, path);
        path.pop_back();
        break;
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: {
        int p = precedence(f);
        bool right_assoc = f.kind() == K::Implies;
        path.push_back(0);
        formula(f.sub(0), right_assoc ? p + 1 : p, false, path);
        path.pop_back();
        space();
        switch (f.kind()) {
          case K::And: token("&", "∧", TokClass::Connective, path); break;
          case K::Or: token("|", "∨", TokClass::Connective, path); break;
          case K::Implies: token("->", "→", TokClass::Connective, path); break;
          default: token("<->", "↔", TokClass::Connective, path); break;
        }
        space();
        path.push_back(1);
        formula(f.sub(1), right_assoc ? p : p + 1, rightmost, path);
        path.pop_back();
        break;
      }
      case K::ForAll:
      case K::Exists:
      case K::ExistsUnique: {
        const char* ascii = f.kind() == K::ForAll ? "forall" : f.kind() == K::Exists ? "exists" : "exists!";
        const char* uni = f.kind() == K::ForAll ? "∀" : f.kind() == K::Exists ? "∃" : "∃!";
        token(ascii, uni, TokClass::Quantifier, path);
        if (style_ != Style::Unicode) space();
        token(f.bound_var(), f.bound_var(), TokClass::Variable, path);
        space();
        path.push_back(0);
        punct("(", path);
        formula(f.body(), 0, true, path);
        punct(")", path);
        path.pop_back();
        break;
      }
    }
  }

  void term(const Term& t, Path& path) {
    using K = Term::Kind;
    switch (t.kind()) {
      case K::Var:
        token(t.name(), t.name(), TokClass::Variable, path);
        break;
      case K::Empty:
        token("{}", "∅", TokClass::SetOp, path);
        break;
      case K::Union:
      case K::Inter:
      case K::Diff: {
        path.push_back(0);
        term(t.child(0), path);
        path.pop_back();
        space();
        const char* ascii = t.kind() == K::Union ? "union" : t.kind() == K::Inter ? "inter" : "\\";
        const char* uni = t.kind() == K::Union ? "∪" : t.kind() == K::Inter ? "∩" : "\\";
        token(ascii, uni, TokClass::SetOp, path);
        space();
        path.push_back(1);
        bool parens = t.child(1).is_binary();
        if (parens) punct("(", path);
        term(t.child(1), path);
        if (parens) punct(")", path);
        path.pop_back();
        break;
      }
      case K::Pow:
      case K::FamUnion:
      case K::FamInter: {
        const char* ascii = t.kind() == K::Pow ? "pow" : t.kind() == K::FamUnion ? "Union" : "Inter";
        const char* uni = t.kind() == K::Pow ? "𝒫" : t.kind() == K::FamUnion ? "⋃" : "⋂";
        token(ascii, uni, TokClass::SetOp, path);
        const Term& inner = t.child(0);
        bool bare = style_ == Style::Unicode && t.kind() != K::Pow &&
                    (inner.kind() == K::Var || inner.kind() == K::Empty);
        path.push_back(0);
        if (!bare) punct("(", path);
        term(inner, path);
        if (!bare) punct(")", path);
        path.pop_back();
        break;
      }
    }
  }

 private:
  void space() { out_ += ' '; }

  void punct(const char* text, const Path& path) { token(text, text, TokClass::Punct, path); }

  void token(std::string_view ascii, std::string_view uni, TokClass cls, const Path& path) {
    switch (style_) {
      case Style::Ascii:
        out_ += ascii;
        break;
      case Style::Unicode:
        out_ += uni;
        break;
      case Style::Html:
        out_ += "<span class=\"";
        out_ += class_name(cls);
        out_ += "\" data-path=\"";
        out_ += path_to_string(path);
        out_ += "\">";
        out_ += html_escape(ascii);
        out_ += "</span>";
        break;
    }
  }

  Style style_;
  std::string out_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).formula_to_end(); }

Term parse_term(std::string_view text) { return Parser(text).term_to_end(); }

std::string render(const Formula& f, Style style) {
  Renderer r(style);
  Path path;
  r.formula(f, 0, true, path);
  return r.take();
}

std::string render(const Term& t, Style style) {
  Renderer r(style);
  Path path;
  r.term(t, path);
  return r.take();
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace setproof
