// Concrete syntax for the closed-formula language.
//
//   predicate := or_pred
//   or_pred   := and_pred { "\/" and_pred }
//   and_pred  := prim_pred { "/\" prim_pred }
//   prim_pred := term ("<=" | "==") term
//              | "(" or_pred ")"
//              | "forall" ident "in" "[" number "," number "]" ":" or_pred
//   term      := factor { ("+" | "-") factor }
//   factor    := unary { "*" unary }
//   unary     := "-" unary | primary
//   primary   := number | ident | fn "(" term {"," term} ")" | "(" term ")"
//   fn        := abs | sin | cos | exp | min | max
//
// A bare `<`, and the identifiers `not` and `exists`, raise GrammarError:
// they could denote non-closed sets and are rejected by design. `/` on its
// own is a SyntaxError (division is not part of the term grammar).
#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "realind/ast.hpp"
#include "realind/errors.hpp"

namespace realind {

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

enum class Tok {
  number,
  ident,
  le,       // <=
  eq,       // ==
  and_op,   // /\ .
  or_op,    // \/
  plus,
  minus,
  star,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  colon,
  end,
};

struct Token {
  Tok kind;
  std::size_t pos;
  double number = 0.0;
  std::string text{};
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      const std::size_t pos = i_;
      if (i_ >= src_.size()) {
        out.push_back({Tok::end, pos});
        return out;
      }
      const char c = src_[i_];
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && i_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        out.push_back(number(pos));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(ident(pos));
        continue;
      }
      switch (c) {
        case '<':
          if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
            i_ += 2;
            out.push_back({Tok::le, pos});
            break;
          }
          throw GrammarError("strict comparison '<' does not denote a closed set", pos);
        case '=':
          if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
            i_ += 2;
            out.push_back({Tok::eq, pos});
            break;
          }
          throw SyntaxError("expected '=='", pos);
        case '/':
          if (i_ + 1 < src_.size() && src_[i_ + 1] == '\\') {
            i_ += 2;
            out.push_back({Tok::and_op, pos});
            break;
          }
          throw SyntaxError("'/' is not a term operator (no division in the grammar)", pos);
        case '\\':
          if (i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
            i_ += 2;
            out.push_back({Tok::or_op, pos});
            break;
          }
          throw SyntaxError("expected '\\/'", pos);
        case '+': ++i_; out.push_back({Tok::plus, pos}); break;
        case '-': ++i_; out.push_back({Tok::minus, pos}); break;
        case '*': ++i_; out.push_back({Tok::star, pos}); break;
        case '(': ++i_; out.push_back({Tok::lparen, pos}); break;
        case ')': ++i_; out.push_back({Tok::rparen, pos}); break;
        case '[': ++i_; out.push_back({Tok::lbracket, pos}); break;
        case ']': ++i_; out.push_back({Tok::rbracket, pos}); break;
        case ',': ++i_; out.push_back({Tok::comma, pos}); break;
        case ':': ++i_; out.push_back({Tok::colon, pos}); break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
      }
    }
  }

 private:
  void skip_ws() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  Token number(std::size_t pos) {
    double v = 0.0;
    auto res = std::from_chars(src_.data() + i_, src_.data() + src_.size(), v);
    if (res.ec != std::errc{})
      throw SyntaxError("malformed number literal", pos);
    i_ = static_cast<std::size_t>(res.ptr - src_.data());
    return {Tok::number, pos, v};
  }

  Token ident(std::size_t pos) {
    std::size_t j = i_;
    while (j < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
      ++j;
    std::string text(src_.substr(i_, j - i_));
    i_ = j;
    if (text == "not")
      throw GrammarError("negation does not preserve closedness", pos);
    if (text == "exists")
      throw GrammarError("existential quantification does not preserve closedness", pos);
    return {Tok::ident, pos, 0.0, std::move(text)};
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  PredPtr predicate() {
    PredPtr p = or_pred();
    expect(Tok::end, "trailing input after predicate");
    return p;
  }

  TermPtr term_only() {
    TermPtr t = term();
    expect(Tok::end, "trailing input after term");
    return t;
  }

 private:
  const Token& peek() const { return toks_[k_]; }
  Token take() { return toks_[k_++]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++k_;
    return true;
  }

  void expect(Tok kind, const char* what) {
    if (!accept(kind)) throw SyntaxError(what, peek().pos);
  }

  PredPtr or_pred() {
    PredPtr p = and_pred();
    while (accept(Tok::or_op)) p = disj(p, and_pred());
    return p;
  }

  PredPtr and_pred() {
    PredPtr p = prim_pred();
    while (accept(Tok::and_op)) p = conj(p, prim_pred());
    return p;
  }

  PredPtr prim_pred() {
    if (peek().kind == Tok::ident && peek().text == "forall") return quantifier();
    if (peek().kind == Tok::lparen) {
      // lookahead decides between a parenthesised predicate and a
      // parenthesised term starting an atom
      const std::size_t save = k_;
      ++k_;
      try {
        PredPtr inner = or_pred();
        expect(Tok::rparen, "expected ')'");
        return inner;
      } catch (const GrammarError&) {
        throw;
      } catch (const SyntaxError&) {
        k_ = save;
      }
    }
    TermPtr lhs = term();
    if (accept(Tok::le)) return le(lhs, term());
    if (accept(Tok::eq)) return eq(lhs, term());
    throw SyntaxError("expected '<=' or '==' after term", peek().pos);
  }

  PredPtr quantifier() {
    take();  // forall
    if (peek().kind != Tok::ident)
      throw SyntaxError("expected a variable name after 'forall'", peek().pos);
    std::string var = take().text;
    if (!(peek().kind == Tok::ident && peek().text == "in"))
      throw SyntaxError("expected 'in' after the quantified variable", peek().pos);
    take();
    const std::size_t dom_pos = peek().pos;
    expect(Tok::lbracket, "expected '[' opening the domain");
    const double lo = signed_number();
    expect(Tok::comma, "expected ',' between domain endpoints");
    const double hi = signed_number();
    expect(Tok::rbracket, "expected ']' closing the domain");
    expect(Tok::colon, "expected ':' after the domain");
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw SyntaxError("quantifier domain is not a closed bounded interval", dom_pos);
    return forall(std::move(var), Interval(lo, hi), or_pred());
  }

  double signed_number() {
    bool negate = accept(Tok::minus);
    if (peek().kind != Tok::number)
      throw SyntaxError("expected a number", peek().pos);
    double v = take().number;
    return negate ? -v : v;
  }

  TermPtr term() {
    TermPtr t = factor();
    while (true) {
      if (accept(Tok::plus)) t = add(t, factor());
      else if (accept(Tok::minus)) t = sub(t, factor());
      else return t;
    }
  }

  TermPtr factor() {
    TermPtr t = unary();
    while (accept(Tok::star)) t = mul(t, unary());
    return t;
  }

  TermPtr unary() {
    if (accept(Tok::minus)) {
      // a minus directly on a literal folds into a signed constant
      if (peek().kind == Tok::number) return constant(-take().number);
      return neg(unary());
    }
    return primary();
  }

  TermPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number:
        return constant(take().number);
      case Tok::lparen: {
        take();
        TermPtr inner = term();
        expect(Tok::rparen, "expected ')'");
        return inner;
      }
      case Tok::ident: {
        Token id = take();
        if (peek().kind == Tok::lparen) return call(std::move(id));
        return variable(std::move(id.text));
      }
      default:
        throw SyntaxError("expected a term", t.pos);
    }
  }

  TermPtr call(Token id) {
    take();  // (
    TermPtr first = term();
    if (id.text == "abs" || id.text == "sin" || id.text == "cos" || id.text == "exp") {
      expect(Tok::rparen, "expected ')' after the argument");
      if (id.text == "abs") return realind::abs(first);
      if (id.text == "sin") return realind::sin(first);
      if (id.text == "cos") return realind::cos(first);
      return realind::exp(first);
    }
    if (id.text == "min" || id.text == "max") {
      expect(Tok::comma, "expected ',' between arguments");
      TermPtr second = term();
      expect(Tok::rparen, "expected ')' after the arguments");
      return id.text == "min" ? realind::min(first, second) : realind::max(first, second);
    }
    throw SyntaxError("unknown function '" + id.text + "'", id.pos);
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

}  // namespace detail

inline PredPtr parse(std::string_view text) {
  return detail::Parser(text).predicate();
}

inline TermPtr parse_term(std::string_view text) {
  return detail::Parser(text).term_only();
}

namespace detail {

// term precedence levels for the printer
enum : int { lvl_additive = 0, lvl_mul = 1, lvl_unary = 2, lvl_primary = 3 };

inline void print_term(const TermPtr& t, int level, std::string& out);

inline void print_binary(const TermPtr& t, int level, int self, const char* op,
                         std::string& out) {
  const bool parens = level > self;
  if (parens) out += '(';
  print_term(t->lhs, self, out);
  out += op;
  print_term(t->rhs, self + 1, out);
  if (parens) out += ')';
}

inline void print_call(const char* fn, const TermPtr& t, std::string& out) {
  out += fn;
  out += '(';
  print_term(t->lhs, lvl_additive, out);
  if (t->rhs) {
    out += ", ";
    print_term(t->rhs, lvl_additive, out);
  }
  out += ')';
}

inline void print_term(const TermPtr& t, int level, std::string& out) {
  switch (t->kind) {
    case TermKind::constant: {
      const bool parens = level > lvl_unary && std::signbit(t->value);
      if (parens) out += '(';
      out += format_double(t->value);
      if (parens) out += ')';
      return;
    }
    case TermKind::variable:
      out += t->name;
      return;
    case TermKind::add: print_binary(t, level, lvl_additive, " + ", out); return;
    case TermKind::sub: print_binary(t, level, lvl_additive, " - ", out); return;
    case TermKind::mul: print_binary(t, level, lvl_mul, "*", out); return;
    case TermKind::neg: {
      const bool parens = level > lvl_unary;
      if (parens) out += '(';
      out += '-';
      // parenthesise any operand the parser would not re-attach to the minus
      if (t->lhs->kind == TermKind::variable ||
          t->lhs->kind == TermKind::abs || t->lhs->kind == TermKind::sin ||
          t->lhs->kind == TermKind::cos || t->lhs->kind == TermKind::exp ||
          t->lhs->kind == TermKind::min || t->lhs->kind == TermKind::max ||
          t->lhs->kind == TermKind::neg) {
        print_term(t->lhs, lvl_unary, out);
      } else {
        out += '(';
        print_term(t->lhs, lvl_additive, out);
        out += ')';
      }
      if (parens) out += ')';
      return;
    }
    case TermKind::abs: print_call("abs", t, out); return;
    case TermKind::sin: print_call("sin", t, out); return;
    case TermKind::cos: print_call("cos", t, out); return;
    case TermKind::exp: print_call("exp", t, out); return;
    case TermKind::min: print_call("min", t, out); return;
    case TermKind::max: print_call("max", t, out); return;
  }
}

// predicate levels: disjunction 0, conjunction 1, atoms 2. `tail` marks a
// position whose text extends to the end of the enclosing group; a
// quantifier is safe without parentheses only there, because its body is
// parsed as greedily as possible.
inline void print_pred(const PredPtr& p, int level, bool tail, std::string& out) {
  switch (p->kind) {
    case PredKind::le:
    case PredKind::eq:
      print_term(p->lhs, lvl_additive, out);
      out += p->kind == PredKind::le ? " <= " : " == ";
      print_term(p->rhs, lvl_additive, out);
      return;
    case PredKind::conj: {
      const bool parens = level > 1;
      if (parens) out += '(';
      print_pred(p->left, 1, false, out);
      out += " /\\ ";
      print_pred(p->right, 2, tail || parens, out);
      if (parens) out += ')';
      return;
    }
    case PredKind::disj: {
      const bool parens = level > 0;
      if (parens) out += '(';
      print_pred(p->left, 0, false, out);
      out += " \\/ ";
      print_pred(p->right, 1, tail || parens, out);
      if (parens) out += ')';
      return;
    }
    case PredKind::forall: {
      const bool parens = !tail;
      if (parens) out += '(';
      out += "forall ";
      out += p->var;
      out += " in [";
      out += format_double(p->domain.lo());
      out += ',';
      out += format_double(p->domain.hi());
      out += "]: ";
      print_pred(p->left, 0, true, out);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string print(const TermPtr& t) {
  std::string out;
  detail::print_term(t, detail::lvl_additive, out);
  return out;
}

inline std::string print(const PredPtr& p) {
  std::string out;
  detail::print_pred(p, 0, true, out);
  return out;
}

}  // namespace realind
