// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "invacheck/expr.hpp"
#include "invacheck/optimize.hpp"
#include "invacheck/sets.hpp"
#include "invacheck/verdict.hpp"

namespace invacheck {

// Invariance checks for x_{k+1} = f(x_k).  Global mode asserts the residual
// inequality over the whole search box (standing in for R^n) under curvature
// hypotheses that are probed and attached; Restricted mode asserts it on the
// candidate set only and needs no hypotheses.  Only the linear fast paths
// return Exact verdicts; everything optimizer-backed is Numerical at the
// configured effort.

/// Residual r_i(x) = H_i'Gx - G_i'f(x) - H_i'b + b_i must be >= 0 for every
/// row; verifies a supplied H >= 0.
CheckVerdict verify_polyhedral_h(const Polyhedron& p, const VectorField& f, const Mat& h, Mode mode,
                                 const OptConfig& cfg);

/// Searches H row by row with a cutting-plane loop (LP over sampled points,
/// then a global re-check of the candidate row; at most 50 rounds per row).
CheckVerdict search_polyhedral_h(const Polyhedron& p, const VectorField& f, Mode mode,
                                 const OptConfig& cfg);

/// Exact path for f(x) = Ax: one LP per row (min b'H_i s.t. G'H_i = A'G_i,
/// H_i >= 0), value <= b_i for every row iff invariant.
CheckVerdict linear_polyhedral_check(const Polyhedron& p, const Mat& a);

/// Residual r(x) = beta x'Qx - f(x)'Qf(x) - beta + 1 for a supplied beta.
CheckVerdict verify_ellipsoid_beta(const Ellipsoid& e, const VectorField& f, double beta, Mode mode,
                                   const OptConfig& cfg);

/// Outer scalar search over beta (bounded by 1 - f(0)'Qf(0) in Global mode).
CheckVerdict search_ellipsoid_beta(const Ellipsoid& e, const VectorField& f, Mode mode,
                                   const OptConfig& cfg);

/// Exact path for f(x) = Ax: A'QA - Q negative semidefinite iff invariant.
CheckVerdict linear_ellipsoid_check(const Ellipsoid& e, const Mat& a);

/// Residual alpha g(x) - g(f(x)) for a supplied alpha.  When g and g(f(x))
/// are both quadratic the concavity probe is waived.
CheckVerdict verify_convex_alpha(const SublevelSet& s, const VectorField& f, double alpha, Mode mode,
                                 const OptConfig& cfg);

/// Outer scalar search over alpha in [0, 1e3].
CheckVerdict search_convex_alpha(const SublevelSet& s, const VectorField& f, Mode mode,
                                 const OptConfig& cfg);

/// Dual route for the alpha residual: maximize alpha g(x) - g(f(x)) subject
/// to alpha grad g(x) - grad g(f(x)) = 0.  Under certified convexity of g and
/// concavity of g(f(x)) this equals the residual's global minimum.
OptResult wolfe_dual_value(const SublevelSet& s, const VectorField& f, double alpha,
                           const OptConfig& cfg);

/// Implication check {phi <= 0} => {psi(f(x)) <= 0} via
/// eps* = sup { psi(f(x)) | phi(x) <= 0 }; invariance is the psi = phi case.
CheckVerdict epsilon_implication(const Expr& phi, const Expr& psi, const VectorField& f,
                                 const OptConfig& cfg);

/// A when f(x) = Ax exactly (constant Jacobian and f(0) = 0), otherwise empty.
std::optional<Mat> linear_map_matrix(const VectorField& f);

}  // namespace invacheck
