// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "invacheck/expr.hpp"
#include "invacheck/linalg.hpp"

// Builders assembling the checkers' residual expressions from matrices,
// vectors, and maps.  Everything stays symbolic so gradients are exact.

namespace invacheck {

/// sum_j c[j] * x_{j+1}
inline Expr linear_form(std::span<const double> c) {
  Expr acc = Expr::constant(0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    acc = acc + Expr::constant(c[j]) * Expr::variable(static_cast<int>(j) + 1);
  }
  return acc;
}

/// x' Q x  (Q square; symmetrized cross terms)
inline Expr quadratic_form(const Mat& q) {
  Expr acc = Expr::constant(0.0);
  for (int i = 0; i < q.rows; ++i) {
    if (q(i, i) != 0.0)
      acc = acc + Expr::constant(q(i, i)) * Expr::integer_pow(Expr::variable(i + 1), 2);
    for (int j = i + 1; j < q.cols; ++j) {
      const double c = q(i, j) + q(j, i);
      if (c == 0.0) continue;
      acc = acc + Expr::constant(c) * Expr::variable(i + 1) * Expr::variable(j + 1);
    }
  }
  return acc;
}

/// sum_i c[i] * f_i(x)
inline Expr field_dot(std::span<const double> c, const VectorField& f) {
  Expr acc = Expr::constant(0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    acc = acc + Expr::constant(c[i]) * f.components[i];
  }
  return acc;
}

/// f(x)' Q f(x)
inline Expr field_quadratic(const Mat& q, const VectorField& f) {
  Expr acc = Expr::constant(0.0);
  for (int i = 0; i < q.rows; ++i) {
    if (q(i, i) != 0.0)
      acc = acc + Expr::constant(q(i, i)) *
                      Expr::integer_pow(f.components[static_cast<std::size_t>(i)], 2);
    for (int j = i + 1; j < q.cols; ++j) {
      const double c = q(i, j) + q(j, i);
      if (c == 0.0) continue;
      acc = acc + Expr::constant(c) * f.components[static_cast<std::size_t>(i)] *
                      f.components[static_cast<std::size_t>(j)];
    }
  }
  return acc;
}

/// g(f(x))
inline Expr compose(const Expr& g, const VectorField& f) {
  return g.substitute(f.components);
}

}  // namespace invacheck
