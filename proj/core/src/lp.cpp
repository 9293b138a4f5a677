// SPDX-License-Identifier: Apache-2.0
#include "invacheck/lp.hpp"

#include <algorithm>
#include <cmath>

#include "invacheck/tolerances.hpp"

namespace invacheck {

namespace {

// Full-tableau simplex state.  Column layout: structural | artificial | rhs.
struct Tableau {
  int m = 0;        // rows
  int n = 0;        // structural columns
  int total = 0;    // structural + artificial
  std::vector<std::vector<double>> t;  // m rows of total+1
  std::vector<int> basis;              // column index per row

  double& rhs(int i) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(total)]; }
  double rhs(int i) const { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(total)]; }
  double& at(int i, int j) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double at(int i, int j) const { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  void pivot(int row, int col) {
    auto& pr = t[static_cast<std::size_t>(row)];
    const double inv = 1.0 / pr[static_cast<std::size_t>(col)];
    for (auto& v : pr) v *= inv;
    pr[static_cast<std::size_t>(col)] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      auto& ri = t[static_cast<std::size_t>(i)];
      const double f = ri[static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (int j = 0; j <= total; ++j) ri[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
      ri[static_cast<std::size_t>(col)] = 0.0;
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Reduced costs for objective `c` (length = tab.total, +inf marks banned columns).
Vec reduced_costs(const Tableau& tab, const Vec& c) {
  Vec r = c;
  for (int i = 0; i < tab.m; ++i) {
    const double cb = c[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])];
    if (cb == 0.0) continue;
    for (int j = 0; j < tab.total; ++j) r[static_cast<std::size_t>(j)] -= cb * tab.at(i, j);
  }
  return r;
}

enum class IterateOutcome { Optimal, Unbounded };

// Bland's rule: entering = smallest column with negative reduced cost;
// leaving = smallest basis variable among minimum-ratio rows.
IterateOutcome simplex_iterate(Tableau& tab, const Vec& c, const std::vector<bool>& banned) {
  for (;;) {
    const Vec r = reduced_costs(tab, c);
    int enter = -1;
    for (int j = 0; j < tab.total; ++j) {
      if (banned[static_cast<std::size_t>(j)]) continue;
      if (r[static_cast<std::size_t>(j)] < -tols::kLpReducedCost) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return IterateOutcome::Optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < tab.m; ++i) {
      const double a = tab.at(i, enter);
      if (a <= tols::kLpPivot) continue;
      const double ratio = tab.rhs(i) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 &&
           tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return IterateOutcome::Unbounded;
    tab.pivot(leave, enter);
  }
}

}  // namespace

LpResult lp_solve(const LpProblem& p) {
  const int m = p.a_eq.rows;
  const int n = p.a_eq.cols;
  if (static_cast<int>(p.c.size()) != n) throw DimensionError("objective length mismatch");
  if (static_cast<int>(p.b_eq.size()) != m) throw DimensionError("rhs length mismatch");
  if (!p.lower.empty() && static_cast<int>(p.lower.size()) != n)
    throw DimensionError("lower bound length mismatch");
  for (double v : p.c)
    if (!std::isfinite(v)) throw ArithmeticError("non-finite objective");
  for (double v : p.b_eq)
    if (!std::isfinite(v)) throw ArithmeticError("non-finite rhs");
  for (double v : p.lower)
    if (!std::isfinite(v)) throw ArithmeticError("non-finite lower bound");

  // shift to y = x - lower >= 0
  Vec lower = p.lower.empty() ? Vec(static_cast<std::size_t>(n), 0.0) : p.lower;
  Vec b = p.b_eq;
  double shift_cost = 0.0;
  for (int j = 0; j < n; ++j) {
    if (lower[static_cast<std::size_t>(j)] == 0.0) continue;
    shift_cost += p.c[static_cast<std::size_t>(j)] * lower[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) b[static_cast<std::size_t>(i)] -= p.a_eq(i, j) * lower[static_cast<std::size_t>(j)];
  }

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.total = n + m;
  tab.t.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(tab.total) + 1, 0.0));
  tab.basis.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double sign = b[static_cast<std::size_t>(i)] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.at(i, j) = sign * p.a_eq(i, j);
    tab.at(i, n + i) = 1.0;
    tab.rhs(i) = sign * b[static_cast<std::size_t>(i)];
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }

  // phase 1: minimize sum of artificials
  Vec c1(static_cast<std::size_t>(tab.total), 0.0);
  for (int j = n; j < tab.total; ++j) c1[static_cast<std::size_t>(j)] = 1.0;
  std::vector<bool> none(static_cast<std::size_t>(tab.total), false);
  (void)simplex_iterate(tab, c1, none);  // phase 1 cannot be unbounded (cost >= 0)

  double art_sum = 0.0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] >= n) art_sum += tab.rhs(i);
  if (art_sum > tols::kLpFeasibility) return LpResult{LpStatus::Infeasible, {}, 0.0, {}};

  // drive remaining artificials out of the basis; rows that cannot pivot are
  // redundant and get dropped
  for (int i = 0; i < tab.m;) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) {
      ++i;
      continue;
    }
    int piv = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-7) {
        piv = j;
        break;
      }
    }
    if (piv >= 0) {
      tab.pivot(i, piv);
      ++i;
    } else {
      tab.t.erase(tab.t.begin() + i);
      tab.basis.erase(tab.basis.begin() + i);
      --tab.m;
    }
  }

  // phase 2
  Vec c2(static_cast<std::size_t>(tab.total), 0.0);
  for (int j = 0; j < n; ++j) c2[static_cast<std::size_t>(j)] = p.c[static_cast<std::size_t>(j)];
  std::vector<bool> banned(static_cast<std::size_t>(tab.total), false);
  for (int j = n; j < tab.total; ++j) banned[static_cast<std::size_t>(j)] = true;
  if (simplex_iterate(tab, c2, banned) == IterateOutcome::Unbounded)
    return LpResult{LpStatus::Unbounded, {}, 0.0, {}};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < tab.m; ++i) {
    const int bj = tab.basis[static_cast<std::size_t>(i)];
    if (bj < n) res.x[static_cast<std::size_t>(bj)] = tab.rhs(i);
  }
  for (int j = 0; j < n; ++j) res.x[static_cast<std::size_t>(j)] += lower[static_cast<std::size_t>(j)];
  res.value = shift_cost;
  for (int j = 0; j < n; ++j)
    res.value += p.c[static_cast<std::size_t>(j)] * (res.x[static_cast<std::size_t>(j)] - lower[static_cast<std::size_t>(j)]);
  const Vec rc = reduced_costs(tab, c2);
  res.reduced_costs.assign(rc.begin(), rc.begin() + n);
  return res;
}

int LpBuilder::add_var(double lo, double hi, double cost) {
  vars_.push_back(Var{lo, hi, cost});
  return static_cast<int>(vars_.size()) - 1;
}

void LpBuilder::add_le(std::vector<std::pair<int, double>> terms, double rhs) {
  rows_.push_back(Row{std::move(terms), rhs, -1});
}

void LpBuilder::add_ge(std::vector<std::pair<int, double>> terms, double rhs) {
  rows_.push_back(Row{std::move(terms), rhs, +1});
}

void LpBuilder::add_eq(std::vector<std::pair<int, double>> terms, double rhs) {
  rows_.push_back(Row{std::move(terms), rhs, 0});
}

LpBuilder::Solved LpBuilder::solve() const {
  // column layout: one column per variable, plus a mirror column for split
  // (free) variables, then slack/surplus columns, then upper-bound slacks
  const int nu = static_cast<int>(vars_.size());
  std::vector<int> col_of(static_cast<std::size_t>(nu));
  std::vector<int> neg_col_of(static_cast<std::size_t>(nu), -1);
  int ncols = 0;
  for (int v = 0; v < nu; ++v) {
    col_of[static_cast<std::size_t>(v)] = ncols++;
    if (std::isinf(vars_[static_cast<std::size_t>(v)].lo)) neg_col_of[static_cast<std::size_t>(v)] = ncols++;
  }
  int nrows = static_cast<int>(rows_.size());
  int slack_cols = 0;
  for (const auto& r : rows_)
    if (r.kind != 0) ++slack_cols;
  int ub_rows = 0;
  for (const auto& v : vars_)
    if (std::isfinite(v.hi)) ++ub_rows;

  const int total_cols = ncols + slack_cols + ub_rows;
  const int total_rows = nrows + ub_rows;
  Mat a(total_rows, total_cols);
  Vec b(static_cast<std::size_t>(total_rows), 0.0);
  Vec c(static_cast<std::size_t>(total_cols), 0.0);
  Vec lower(static_cast<std::size_t>(total_cols), 0.0);

  for (int v = 0; v < nu; ++v) {
    const auto& var = vars_[static_cast<std::size_t>(v)];
    c[static_cast<std::size_t>(col_of[static_cast<std::size_t>(v)])] = var.cost;
    if (neg_col_of[static_cast<std::size_t>(v)] >= 0)
      c[static_cast<std::size_t>(neg_col_of[static_cast<std::size_t>(v)])] = -var.cost;
    else
      lower[static_cast<std::size_t>(col_of[static_cast<std::size_t>(v)])] = var.lo;
  }

  int srow = 0;
  int scol = ncols;
  for (const auto& r : rows_) {
    for (const auto& [v, coef] : r.terms) {
      a(srow, col_of[static_cast<std::size_t>(v)]) += coef;
      if (neg_col_of[static_cast<std::size_t>(v)] >= 0) a(srow, neg_col_of[static_cast<std::size_t>(v)]) -= coef;
    }
    b[static_cast<std::size_t>(srow)] = r.rhs;
    if (r.kind == -1) a(srow, scol++) = 1.0;
    if (r.kind == +1) a(srow, scol++) = -1.0;
    ++srow;
  }
  for (int v = 0; v < nu; ++v) {
    if (!std::isfinite(vars_[static_cast<std::size_t>(v)].hi)) continue;
    a(srow, col_of[static_cast<std::size_t>(v)]) = 1.0;
    if (neg_col_of[static_cast<std::size_t>(v)] >= 0) a(srow, neg_col_of[static_cast<std::size_t>(v)]) = -1.0;
    a(srow, scol++) = 1.0;
    b[static_cast<std::size_t>(srow)] = vars_[static_cast<std::size_t>(v)].hi;
    ++srow;
  }

  const LpResult raw = lp_solve(LpProblem{c, a, b, lower});
  Solved out;
  out.status = raw.status;
  if (raw.status != LpStatus::Optimal) return out;
  out.value = raw.value;
  out.x.resize(static_cast<std::size_t>(nu));
  for (int v = 0; v < nu; ++v) {
    double x = raw.x[static_cast<std::size_t>(col_of[static_cast<std::size_t>(v)])];
    if (neg_col_of[static_cast<std::size_t>(v)] >= 0)
      x -= raw.x[static_cast<std::size_t>(neg_col_of[static_cast<std::size_t>(v)])];
    out.x[static_cast<std::size_t>(v)] = x;
  }
  return out;
}

}  // namespace invacheck
