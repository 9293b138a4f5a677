// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "invacheck/expr.hpp"
#include "invacheck/sets.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

/// Objective with optional analytic gradient; a missing gradient falls back
/// to central finite differences (h = 1e-6 * (1 + |x_i|)).
struct ScalarFunction {
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;  // empty => FD
};

ScalarFunction make_function(const Expr& e, int dim);
ScalarFunction make_fd_function(std::function<double(std::span<const double>)> f, int dim);
Vec fd_gradient(const std::function<double(std::span<const double>)>& f, std::span<const double> x);

struct OptConfig {
  int starts = 64;
  int max_iters = 500;
  double grad_tol = 1e-10;
  double armijo = 1e-4;
  double shrink = 0.5;
  Box box;  // must be set to the search domain
  std::uint64_t seed = 0;
};

enum class OptStatus { Converged, IterCap, AllSamplesInvalid };

struct OptResult {
  Vec best_point;
  double best_value = std::numeric_limits<double>::quiet_NaN();
  OptStatus status = OptStatus::AllSamplesInvalid;
  int starts_used = 0;
  int invalid_starts = 0;  // starts whose objective was NaN
  long total_iterations = 0;
  std::vector<std::string> notes;
};

/// Projected gradient descent with Armijo backtracking from `starts`
/// low-discrepancy points in the box.  NaN regions act as +inf.
OptResult minimize_multistart(const ScalarFunction& f, const OptConfig& cfg);
OptResult maximize_multistart(const ScalarFunction& f, const OptConfig& cfg);

// single descent/ascent from a given start point
OptResult minimize_from(const ScalarFunction& f, const Vec& start, const OptConfig& cfg);
OptResult maximize_from(const ScalarFunction& f, const Vec& start, const OptConfig& cfg);

/// Maximization of `objective` over the ellipsoid boundary x'Qx = 1 via the
/// exact sphere parameterization x = L^-T u, |u| = 1.
OptResult maximize_on_level_set(const ScalarFunction& objective, const Ellipsoid& e,
                                const OptConfig& cfg);

/// Maximization of `objective` over {constraint = 0} by quadratic-penalty
/// ascent (weights 1e3, 1e4, 1e5) from boundary samples, with a final
/// bisection re-projection onto the level set.
OptResult maximize_on_level_set(const ScalarFunction& objective, const Expr& constraint,
                                const SublevelSet& region, const OptConfig& cfg);

/// Minimization of `f` over a candidate set: dense feasible sampling, then
/// penalized descent, then feasibility restoration of the best candidates.
OptResult minimize_over_set(const ScalarFunction& f, const CandidateSet& set, const OptConfig& cfg);

struct MaximinResult {
  double multiplier = 0.0;
  OptResult inner;
  std::vector<std::pair<double, double>> trace;  // (multiplier, inner value)
};

/// Outer scalar search: uniform grid over [lo, hi], then golden-section
/// refinement around the best grid point.  `inner` evaluates the inner
/// minimization for a fixed multiplier.
MaximinResult maximin_scalar(double lo, double hi, const std::function<OptResult(double)>& inner,
                             int grid = 33, int refine = 3);

}  // namespace invacheck
