// SPDX-License-Identifier: Apache-2.0
#include "invacheck/expr.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace invacheck {

namespace detail {

enum class NodeKind { Constant, Variable, Unary, Binary };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // Constant
  int var = 0;         // Variable (1-based)
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const ExprNode> a;
  std::shared_ptr<const ExprNode> b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == NodeKind::Constant && n->value == v;
}

bool is_const(const NodePtr& n) { return n->kind == NodeKind::Constant; }

double apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg:
      return -x;
    case UnaryOp::Sqrt:
      return x < 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(x);
    case UnaryOp::Exp:
      return std::exp(x);
    case UnaryOp::Log:
      return x <= 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::log(x);
    case UnaryOp::Sin:
      return std::sin(x);
    case UnaryOp::Cos:
      return std::cos(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double apply_binary(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::Add:
      return x + y;
    case BinaryOp::Sub:
      return x - y;
    case BinaryOp::Mul:
      return x * y;
    case BinaryOp::Div:
      return x / y;
    case BinaryOp::Pow:
      return std::pow(x, y);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_node(const ExprNode& n, std::span<const double> p) {
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable:
      return p[static_cast<std::size_t>(n.var - 1)];
    case NodeKind::Unary:
      return apply_unary(n.uop, eval_node(*n.a, p));
    case NodeKind::Binary:
      return apply_binary(n.bop, eval_node(*n.a, p), eval_node(*n.b, p));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int max_var(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Constant:
      return 0;
    case NodeKind::Variable:
      return n.var;
    case NodeKind::Unary:
      return max_var(*n.a);
    case NodeKind::Binary:
      return std::max(max_var(*n.a), max_var(*n.b));
  }
  return 0;
}

// Printing precedence: Add/Sub = 1, Mul/Div = 2, Neg = 3, Pow = 4, atom = 5.
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value < 0.0 ? 3 : 5;  // negative constants print with a sign
    case NodeKind::Variable:
      return 5;
    case NodeKind::Unary:
      return n.uop == UnaryOp::Neg ? 3 : 5;
    case NodeKind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return 2;
        case BinaryOp::Pow:
          return 4;
      }
  }
  return 5;
}

void print_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant:
      print_double(out, n.value);
      return;
    case NodeKind::Variable:
      out += 'x';
      out += std::to_string(n.var);
      return;
    case NodeKind::Unary: {
      if (n.uop == UnaryOp::Neg) {
        out += '-';
        const bool paren = precedence(*n.a) < 3;
        if (paren) out += '(';
        print_node(*n.a, out);
        if (paren) out += ')';
        return;
      }
      switch (n.uop) {
        case UnaryOp::Sqrt:
          out += "sqrt";
          break;
        case UnaryOp::Exp:
          out += "exp";
          break;
        case UnaryOp::Log:
          out += "log";
          break;
        case UnaryOp::Sin:
          out += "sin";
          break;
        case UnaryOp::Cos:
          out += "cos";
          break;
        default:
          break;
      }
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
    }
    case NodeKind::Binary: {
      if (n.bop == BinaryOp::Pow) {
        const bool paren = precedence(*n.a) < 4;
        if (paren) out += '(';
        print_node(*n.a, out);
        if (paren) out += ')';
        out += '^';
        out += std::to_string(static_cast<long long>(n.b->value));
        return;
      }
      const int prec = precedence(n);
      const bool lparen = precedence(*n.a) < prec;
      if (lparen) out += '(';
      print_node(*n.a, out);
      if (lparen) out += ')';
      switch (n.bop) {
        case BinaryOp::Add:
          out += '+';
          break;
        case BinaryOp::Sub:
          out += '-';
          break;
        case BinaryOp::Mul:
          out += '*';
          break;
        case BinaryOp::Div:
          out += '/';
          break;
        default:
          break;
      }
      // left-associative grammar: equal precedence on the right needs parens
      const bool rparen = precedence(*n.b) <= prec;
      if (rparen) out += '(';
      print_node(*n.b, out);
      if (rparen) out += ')';
      return;
    }
  }
}

}  // namespace
}  // namespace detail

using detail::ExprNode;
using detail::NodeKind;
using detail::NodePtr;

Expr Expr::constant(double value) {
  if (std::isnan(value)) throw ArithmeticError("constant must not be NaN");
  return Expr(detail::make_constant(value));
}

Expr Expr::variable(int index) {
  if (index < 1) throw DimensionError("variable index must be >= 1");
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Variable;
  n->var = index;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, const Expr& operand) {
  if (!operand.valid()) throw ArithmeticError("empty operand");
  const NodePtr& c = operand.node_;
  if (op == UnaryOp::Neg) {
    if (detail::is_const(c)) return constant(-c->value);
    if (c->kind == NodeKind::Unary && c->uop == UnaryOp::Neg) return Expr(c->a);
  } else if (detail::is_const(c)) {
    const double v = detail::apply_unary(op, c->value);
    if (std::isfinite(v)) return constant(v);
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Unary;
  n->uop = op;
  n->a = c;
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  if (!lhs.valid() || !rhs.valid()) throw ArithmeticError("empty operand");
  const NodePtr& a = lhs.node_;
  const NodePtr& b = rhs.node_;
  if (op == BinaryOp::Pow) {
    if (!detail::is_const(b) || b->value != std::floor(b->value))
      throw ArithmeticError("pow exponent must be an integer constant");
    const long long e = static_cast<long long>(b->value);
    if (e == 0) return constant(1.0);
    if (e == 1) return Expr(a);
    if (detail::is_const(a)) {
      const double v = std::pow(a->value, b->value);
      if (std::isfinite(v)) return constant(v);
    }
  } else if (detail::is_const(a) && detail::is_const(b)) {
    const double v = detail::apply_binary(op, a->value, b->value);
    if (std::isfinite(v)) return constant(v);
  }
  switch (op) {
    case BinaryOp::Add:
      if (detail::is_const(a, 0.0)) return Expr(b);
      if (detail::is_const(b, 0.0)) return Expr(a);
      break;
    case BinaryOp::Sub:
      if (detail::is_const(b, 0.0)) return Expr(a);
      if (detail::is_const(a, 0.0)) return unary(UnaryOp::Neg, Expr(b));
      break;
    case BinaryOp::Mul:
      if (detail::is_const(a, 0.0) || detail::is_const(b, 0.0)) return constant(0.0);
      if (detail::is_const(a, 1.0)) return Expr(b);
      if (detail::is_const(b, 1.0)) return Expr(a);
      break;
    case BinaryOp::Div:
      if (detail::is_const(b, 1.0)) return Expr(a);
      break;
    case BinaryOp::Pow:
      break;
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Binary;
  n->bop = op;
  n->a = a;
  n->b = b;
  return Expr(std::move(n));
}

Expr Expr::integer_pow(const Expr& base, long long exponent) {
  return binary(BinaryOp::Pow, base, constant(static_cast<double>(exponent)));
}

bool Expr::is_constant() const { return node_ && node_->kind == NodeKind::Constant; }

double Expr::constant_value() const {
  if (!is_constant()) throw ArithmeticError("not a constant expression");
  return node_->value;
}

int Expr::max_var_index() const { return node_ ? detail::max_var(*node_) : 0; }

double Expr::eval(std::span<const double> point) const {
  if (!node_) throw ArithmeticError("empty expression");
  if (max_var_index() > static_cast<int>(point.size()))
    throw DimensionError("point has fewer coordinates than the expression uses");
  return detail::eval_node(*node_, point);
}

Expr Expr::derivative(int var) const {
  if (!node_) throw ArithmeticError("empty expression");
  const ExprNode& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
      return constant(0.0);
    case NodeKind::Variable:
      return constant(n.var == var ? 1.0 : 0.0);
    case NodeKind::Unary: {
      const Expr u(n.a);
      const Expr du = u.derivative(var);
      switch (n.uop) {
        case UnaryOp::Neg:
          return -du;
        case UnaryOp::Sqrt:
          return du / (constant(2.0) * unary(UnaryOp::Sqrt, u));
        case UnaryOp::Exp:
          return unary(UnaryOp::Exp, u) * du;
        case UnaryOp::Log:
          return du / u;
        case UnaryOp::Sin:
          return unary(UnaryOp::Cos, u) * du;
        case UnaryOp::Cos:
          return (-unary(UnaryOp::Sin, u)) * du;
      }
      break;
    }
    case NodeKind::Binary: {
      const Expr l(n.a);
      const Expr r(n.b);
      const Expr dl = l.derivative(var);
      switch (n.bop) {
        case BinaryOp::Add:
          return dl + r.derivative(var);
        case BinaryOp::Sub:
          return dl - r.derivative(var);
        case BinaryOp::Mul:
          return dl * r + l * r.derivative(var);
        case BinaryOp::Div:
          return (dl * r - l * r.derivative(var)) / integer_pow(r, 2);
        case BinaryOp::Pow: {
          const long long e = static_cast<long long>(n.b->value);
          return constant(static_cast<double>(e)) * integer_pow(l, e - 1) * dl;
        }
      }
      break;
    }
  }
  throw ArithmeticError("unreachable derivative case");
}

Expr Expr::substitute(std::span<const Expr> replacements) const {
  if (!node_) throw ArithmeticError("empty expression");
  const ExprNode& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
      return Expr(node_);
    case NodeKind::Variable: {
      if (n.var > static_cast<int>(replacements.size()))
        throw DimensionError("substitution list shorter than variable index");
      return replacements[static_cast<std::size_t>(n.var - 1)];
    }
    case NodeKind::Unary:
      return unary(n.uop, Expr(n.a).substitute(replacements));
    case NodeKind::Binary:
      return binary(n.bop, Expr(n.a).substitute(replacements), Expr(n.b).substitute(replacements));
  }
  throw ArithmeticError("unreachable substitute case");
}

std::string Expr::str() const {
  if (!node_) return "<empty>";
  std::string out;
  detail::print_node(*node_, out);
  return out;
}

Derivatives derivatives(const Expr& e, int dim) {
  Derivatives d;
  d.gradient.reserve(static_cast<std::size_t>(dim));
  for (int i = 1; i <= dim; ++i) d.gradient.push_back(e.derivative(i));
  d.hessian.assign(static_cast<std::size_t>(dim), std::vector<Expr>(static_cast<std::size_t>(dim)));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Expr h = d.gradient[static_cast<std::size_t>(i)].derivative(j + 1);
      d.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = h;
      d.hessian[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = h;  // shared node
    }
  }
  return d;
}

VectorField::VectorField(int dim_, std::vector<Expr> comps) : dim(dim_), components(std::move(comps)) {
  if (dim < 1) throw DimensionError("vector field dimension must be positive");
  if (static_cast<int>(components.size()) != dim)
    throw DimensionError("component count does not match dimension");
  for (const auto& c : components)
    if (c.max_var_index() > dim) throw DimensionError("component uses a variable beyond dim");
}

Vec VectorField::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw DimensionError("point length does not match field dim");
  Vec out(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = components[i].eval(x);
  return out;
}

VectorField parse_vector_field(const std::vector<std::string>& texts) {
  const int n = static_cast<int>(texts.size());
  std::vector<Expr> comps;
  comps.reserve(texts.size());
  for (const auto& t : texts) comps.push_back(parse_expr(t, n));
  return VectorField(n, std::move(comps));
}

}  // namespace invacheck
