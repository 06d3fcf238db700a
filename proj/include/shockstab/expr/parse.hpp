#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/expr/ast.hpp"

namespace shockstab::expr {

namespace detail {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokKind kind;
  double number = 0.0;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = TokKind::End;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = TokKind::Number;
        t.number = lex_number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = TokKind::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += advance();
      } else {
        switch (c) {
          case '+': t.kind = TokKind::Plus; break;
          case '-': t.kind = TokKind::Minus; break;
          case '*': t.kind = TokKind::Star; break;
          case '/': t.kind = TokKind::Slash; break;
          case '^': t.kind = TokKind::Caret; break;
          case '(': t.kind = TokKind::LParen; break;
          case ')': t.kind = TokKind::RParen; break;
          default:
            throw ParseError(std::string("syntax error: unexpected character '") + c + "'",
                             line_, column_);
        }
        t.text = advance();
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  double lex_number(Token& t) {
    std::string text;
    bool any_digit = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      text += advance();
      any_digit = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      text += advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        text += advance();
        any_digit = true;
      }
    }
    if (!any_digit) throw ParseError("syntax error: malformed number", t.line, t.column);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::string exp;
      std::size_t save_pos = pos_;
      int save_line = line_, save_col = column_;
      exp += advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) exp += advance();
      bool exp_digit = false;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        exp += advance();
        exp_digit = true;
      }
      if (exp_digit) {
        text += exp;
      } else {  // not an exponent after all; 'e' starts an identifier
        pos_ = save_pos;
        line_ = save_line;
        column_ = save_col;
      }
    }
    t.text = text;
    return std::stod(text);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace detail

/// Resolves identifiers while parsing. State components are addressable as
/// u1..un and through optional per-component aliases. Identifiers that are
/// neither states nor the reserved functions become parameters; when an
/// allowed-parameter set is supplied, anything outside it is rejected.
struct SymbolTable {
  int n = 0;
  std::vector<std::string> state_names;  // aliases, size n or empty
  std::optional<std::set<std::string>> allowed_params;

  // -1 if not a state reference
  int state_index(const std::string& name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
      if (state_names[i] == name) return static_cast<int>(i);
    if (name.size() >= 2 && name[0] == 'u') {
      int idx = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
        idx = idx * 10 + (name[i] - '0');
      }
      if (idx >= 1 && idx <= n &&
          std::find(state_names.begin(), state_names.end(), name) == state_names.end())
        return idx - 1;
    }
    return -1;
  }
};

namespace detail {

class Parser {
public:
  Parser(std::vector<Token> tokens, const SymbolTable& symbols)
      : toks_(std::move(tokens)), sym_(symbols) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    expect(TokKind::End, "end of input");
    return e;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void expect(TokKind k, const char* what) {
    if (peek().kind != k)
      throw ParseError("syntax error: expected " + std::string(what), peek().line,
                       peek().column);
    ++pos_;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (peek().kind == TokKind::Plus || peek().kind == TokKind::Minus) {
      const bool add = next().kind == TokKind::Plus;
      lhs = make_binary(add ? NodeKind::Add : NodeKind::Sub, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_power();
    while (peek().kind == TokKind::Star || peek().kind == TokKind::Slash) {
      const bool mul = next().kind == TokKind::Star;
      lhs = make_binary(mul ? NodeKind::Mul : NodeKind::Div, lhs, parse_power());
    }
    return lhs;
  }

  NodePtr parse_power() {
    NodePtr base = parse_unary();
    if (peek().kind == TokKind::Caret) {
      const Token caret = next();
      NodePtr exponent = parse_power();  // right associative
      if (contains_variable(exponent))
        throw ParseError("exponent must be constant in the state variables", caret.line,
                         caret.column);
      return make_binary(NodeKind::Pow, base, exponent);
    }
    return base;
  }

  NodePtr parse_unary() {
    if (peek().kind == TokKind::Minus) {
      next();
      return make_unary(NodeKind::Neg, parse_unary());
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::Number: {
        next();
        return make_constant(t.number);
      }
      case TokKind::LParen: {
        next();
        NodePtr e = parse_expr();
        expect(TokKind::RParen, "')'");
        return e;
      }
      case TokKind::Ident: {
        next();
        if (t.text == "exp" || t.text == "log" || t.text == "sqrt") {
          expect(TokKind::LParen, "'(' after function name");
          NodePtr arg = parse_expr();
          expect(TokKind::RParen, "')'");
          const NodeKind k = t.text == "exp"   ? NodeKind::Exp
                             : t.text == "log" ? NodeKind::Log
                                               : NodeKind::Sqrt;
          return make_unary(k, arg);
        }
        const int idx = sym_.state_index(t.text);
        if (idx >= 0) return make_variable(idx, t.text);
        if (sym_.allowed_params && !sym_.allowed_params->count(t.text))
          throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column);
        return make_parameter(t.text);
      }
      default:
        throw ParseError("syntax error: unexpected token '" +
                             (t.text.empty() ? "<end>" : t.text) + "'",
                         t.line, t.column);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SymbolTable& sym_;
};

}  // namespace detail

/// Recursive-descent parse with precedence +- < */ < ^ < unary minus,
/// left-associative binaries, right-associative '^' with state-free exponent.
inline ExprAst parse(const std::string& source, const SymbolTable& symbols) {
  detail::Lexer lexer(source);
  detail::Parser parser(lexer.run(), symbols);
  return ExprAst{parser.run(), symbols.n};
}

inline ExprAst parse(const std::string& source, int n) {
  SymbolTable sym;
  sym.n = n;
  return parse(source, sym);
}

}  // namespace shockstab::expr
