// SPDX-License-Identifier: Apache-2.0
#include "invacheck/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace invacheck {

Mat::Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
  if (r < 1 || c < 1) throw DimensionError("matrix dimensions must be positive");
}

Mat::Mat(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {
  if (r < 1 || c < 1) throw DimensionError("matrix dimensions must be positive");
  if (data.size() != static_cast<std::size_t>(r) * c)
    throw DimensionError("matrix data size does not match shape");
  for (double v : data)
    if (!std::isfinite(v)) throw ArithmeticError("matrix entries must be finite");
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::row(int i) const {
  Vec r(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) r[static_cast<std::size_t>(j)] = (*this)(i, j);
  return r;
}

Vec Mat::col(int j) const {
  Vec c(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec matvec(const Mat& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.cols) throw DimensionError("matvec shape mismatch");
  Vec y(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw DimensionError("matmul shape mismatch");
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

Mat mat_sub(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("mat_sub shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows != m.cols) return false;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

Mat cholesky(const Mat& q) {
  if (!is_symmetric(q)) throw NotPositiveDefinite("cholesky input is not symmetric");
  const int n = q.rows;
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = q(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < tols::kCholPivot) throw NotPositiveDefinite("pivot below threshold");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = q(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vec solve_lower_transposed(const Mat& l, std::span<const double> u) {
  const int n = l.rows;
  if (static_cast<int>(u.size()) != n) throw DimensionError("solve shape mismatch");
  Vec x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double s = u[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] = s / l(i, i);
  }
  return x;
}

Vec solve_lower(const Mat& l, std::span<const double> v) {
  const int n = l.rows;
  if (static_cast<int>(v.size()) != n) throw DimensionError("solve shape mismatch");
  Vec w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = v[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= l(i, k) * w[static_cast<std::size_t>(k)];
    w[static_cast<std::size_t>(i)] = s / l(i, i);
  }
  return w;
}

namespace {

double offdiag_frobenius(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenResult sym_eigen(const Mat& m) {
  if (!is_symmetric(m)) throw ArithmeticError("sym_eigen input is not symmetric");
  const int n = m.rows;
  Mat a = m;
  Mat v = Mat::identity(n);

  int sweep = 0;
  while (offdiag_frobenius(a) >= tols::kJacobiOff) {
    if (sweep++ >= tols::kJacobiMaxSweeps)
      throw NoConvergence("Jacobi sweep cap reached; consider rescaling the matrix");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k != p && k != q) {
            const double akp = a(k, p);
            const double akq = a(k, q);
            a(k, p) = c * akp - s * akq;
            a(p, k) = a(k, p);
            a(k, q) = s * akp + c * akq;
            a(q, k) = a(k, q);
          }
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenResult r;
  r.values.resize(static_cast<std::size_t>(n));
  r.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    r.values[static_cast<std::size_t>(j)] = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[static_cast<std::size_t>(j)]);
  }
  return r;
}

bool is_neg_semidefinite(const Mat& m, double tol) {
  if (tol < 0.0) throw ArithmeticError("tolerance must be nonnegative");
  const EigenResult e = sym_eigen(m);
  return e.values.front() <= tol;
}

bool is_pos_semidefinite(const Mat& m, double tol) {
  if (tol < 0.0) throw ArithmeticError("tolerance must be nonnegative");
  const EigenResult e = sym_eigen(m);
  return e.values.back() >= -tol;
}

}  // namespace invacheck
