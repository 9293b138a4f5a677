// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invacheck/errors.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

enum class UnaryOp { Neg, Sqrt, Exp, Log, Sin, Cos };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

namespace detail {
struct ExprNode;
}

/// Immutable scalar expression over variables x1..xn.
///
/// The factories fold constant subtrees and drop arithmetic identities
/// (u+0, u*1, u^1, ...) so that differentiation output stays small and
/// printable.  No further algebraic rewriting is performed.  Evaluation at a
/// point outside the domain of sqrt/log yields a quiet NaN which propagates;
/// it never throws.
class Expr {
 public:
  Expr() = default;

  static Expr constant(double value);
  static Expr variable(int index);  // 1-based
  static Expr unary(UnaryOp op, const Expr& operand);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);
  static Expr integer_pow(const Expr& base, long long exponent);

  bool valid() const { return node_ != nullptr; }
  bool is_constant() const;
  double constant_value() const;
  int max_var_index() const;

  // `point` must cover every variable index used by the expression.
  double eval(std::span<const double> point) const;
  Expr derivative(int var) const;
  // Replaces variable i by replacements[i-1].
  Expr substitute(std::span<const Expr> replacements) const;
  std::string str() const;

  // Structural identity of the shared node (used by hessian mirroring tests).
  bool same_node(const Expr& other) const { return node_ == other.node_; }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(BinaryOp::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(BinaryOp::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(BinaryOp::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(BinaryOp::Div, a, b); }
  friend Expr operator-(const Expr& a) { return unary(UnaryOp::Neg, a); }

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ExprNode> node_;
};

/// Parses infix arithmetic over x1..xdim with +,-,*,/, integer ^, unary minus
/// and the functions sqrt, exp, log, sin, cos.  Whitespace-insensitive, no
/// implicit multiplication.  The grammar is documented in docs/format.md.
Expr parse_expr(std::string_view text, int dim);

struct Derivatives {
  std::vector<Expr> gradient;              // length n
  std::vector<std::vector<Expr>> hessian;  // n x n
};

/// Symbolic gradient and Hessian; the Hessian is mirrored from the upper
/// triangle so (i,j) and (j,i) share one node.
Derivatives derivatives(const Expr& e, int dim);

/// n expressions over x1..xn, used for maps and vector fields alike.
struct VectorField {
  int dim = 0;
  std::vector<Expr> components;

  VectorField() = default;
  VectorField(int dim_, std::vector<Expr> comps);

  Vec eval(std::span<const double> x) const;
};

VectorField parse_vector_field(const std::vector<std::string>& texts);

}  // namespace invacheck
