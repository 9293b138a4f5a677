// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "invacheck/errors.hpp"
#include "invacheck/tolerances.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

// Dense row-major real matrix.  Entries are checked finite on construction.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c);
  Mat(int r, int c, std::vector<double> d);
  static Mat identity(int n);

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  Vec row(int i) const;
  Vec col(int j) const;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vec matvec(const Mat& m, std::span<const double> x);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);
Mat mat_sub(const Mat& a, const Mat& b);
double frobenius_norm(const Mat& m);
bool is_symmetric(const Mat& m, double tol = tols::kSymmetry);

/// Lower-triangular L with L*L^T = Q.  Throws NotPositiveDefinite when a
/// pivot drops below tols::kCholPivot.
Mat cholesky(const Mat& q);

/// Solves L^T x = u for lower-triangular L (back substitution).
Vec solve_lower_transposed(const Mat& l, std::span<const double> u);

/// Solves L w = v for lower-triangular L (forward substitution).
Vec solve_lower(const Mat& l, std::span<const double> v);

struct EigenResult {
  Vec values;   // descending
  Mat vectors;  // orthonormal columns, aligned with values
};

/// Cyclic Jacobi for symmetric matrices; rotates until the off-diagonal
/// Frobenius norm drops under tols::kJacobiOff, capped at
/// tols::kJacobiMaxSweeps sweeps (NoConvergence past the cap — rescale).
EigenResult sym_eigen(const Mat& m);

bool is_neg_semidefinite(const Mat& m, double tol = tols::kPsd);
bool is_pos_semidefinite(const Mat& m, double tol = tols::kPsd);

}  // namespace invacheck
