// SPDX-License-Identifier: Apache-2.0
#include <cctype>
#include <charconv>
#include <string>

#include "invacheck/expr.hpp"

namespace invacheck {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(0, "empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size())
      throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = Expr::binary(BinaryOp::Add, lhs, parse_term());
      else if (eat('-'))
        lhs = Expr::binary(BinaryOp::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return Expr::unary(UnaryOp::Neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (eat('^')) base = Expr::integer_pow(base, parse_int_literal());
    return base;
  }

  long long parse_int_literal() {
    skip_ws();
    const std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw SyntaxError(pos_, "expected an integer exponent after '^'");
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) throw SyntaxError(start, "exponent too large");
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.')
      throw SyntaxError(pos_, "pow exponent must be an integer constant");
    return neg ? -v : v;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!eat(')')) throw SyntaxError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  Expr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{}) throw SyntaxError(pos_, "malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return Expr::constant(value);
  }

  Expr parse_name() {
    const std::size_t start = pos_;
    // variable: 'x' immediately followed by digits
    if (text_[pos_] == 'x' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      long long idx = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        idx = idx * 10 + (text_[pos_] - '0');
        if (idx > 1000000) throw SyntaxError(start, "variable index too large");
        ++pos_;
      }
      if (idx < 1) throw SyntaxError(start, "variable index must be >= 1");
      if (idx > dim_)
        throw DimensionError("variable x" + std::to_string(idx) + " exceeds dimension " +
                             std::to_string(dim_));
      return Expr::variable(static_cast<int>(idx));
    }
    std::string name;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      name += text_[pos_++];
    UnaryOp op;
    if (name == "sqrt")
      op = UnaryOp::Sqrt;
    else if (name == "exp")
      op = UnaryOp::Exp;
    else if (name == "log")
      op = UnaryOp::Log;
    else if (name == "sin")
      op = UnaryOp::Sin;
    else if (name == "cos")
      op = UnaryOp::Cos;
    else
      throw SyntaxError(start, "unknown name '" + name + "'");
    if (!eat('(')) throw SyntaxError(pos_, "expected '(' after " + name);
    Expr arg = parse_expr();
    if (!eat(')')) throw SyntaxError(pos_, "expected ')'");
    return Expr::unary(op, arg);
  }
};

}  // namespace

Expr parse_expr(std::string_view text, int dim) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  return Parser(text, dim).parse();
}

}  // namespace invacheck
