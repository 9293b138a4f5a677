// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "invacheck/linalg.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

/// Equality-form linear program: minimize c'x subject to a_eq x = b_eq and
/// x >= lower (componentwise; `lower` empty means all zeros).
struct LpProblem {
  Vec c;
  Mat a_eq;
  Vec b_eq;
  Vec lower;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
  Vec reduced_costs;  // structural columns, valid when Optimal
};

/// Two-phase dense simplex with Bland's anti-cycling rule.  Infeasible and
/// Unbounded are results, not errors; non-finite input throws ArithmeticError.
LpResult lp_solve(const LpProblem& p);

/// Incremental front end for small LPs with free variables, bounds, and
/// inequality rows.  Free variables are split, inequalities get slacks, and
/// the assembled equality-form problem goes through lp_solve.
class LpBuilder {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  // Returns the variable id.  `lo` may be -inf (variable gets split);
  // `hi` may be +inf.
  int add_var(double lo, double hi, double cost);
  void add_le(std::vector<std::pair<int, double>> terms, double rhs);
  void add_ge(std::vector<std::pair<int, double>> terms, double rhs);
  void add_eq(std::vector<std::pair<int, double>> terms, double rhs);

  struct Solved {
    LpStatus status = LpStatus::Infeasible;
    Vec x;  // user variables
    double value = 0.0;
  };
  Solved solve() const;

 private:
  struct Var {
    double lo, hi, cost;
  };
  struct Row {
    std::vector<std::pair<int, double>> terms;
    double rhs;
    int kind;  // -1 le, 0 eq, +1 ge
  };
  std::vector<Var> vars_;
  std::vector<Row> rows_;
};

}  // namespace invacheck
