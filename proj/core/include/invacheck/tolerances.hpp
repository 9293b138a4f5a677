// SPDX-License-Identifier: Apache-2.0
#pragma once

// Every numeric threshold used by the kernels and checkers lives here.

namespace invacheck::tols {

// linear algebra
inline constexpr double kSymmetry = 1e-10;       // symmetric-input acceptance
inline constexpr double kCholPivot = 1e-12;      // smallest admissible Cholesky pivot
inline constexpr double kJacobiOff = 1e-12;      // off-diagonal Frobenius target
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kPsd = 1e-9;             // default eigenvalue slack for (semi)definiteness
inline constexpr double kMinEigenvalue = 1e-12;  // ellipsoid Q acceptance

// linear programming
inline constexpr double kLpPivot = 1e-9;
inline constexpr double kLpFeasibility = 1e-8;
inline constexpr double kLpReducedCost = 1e-9;

// sets and sampling
inline constexpr double kMembership = 1e-8;
inline constexpr double kBoundaryEq = 1e-9;  // boundary/face equalities for samples

// verdicts
inline constexpr double kResidual = 1e-7;      // residual minima must be >= -kResidual
inline constexpr double kEscape = 1e-6;        // trajectory escape (looser than membership)
inline constexpr double kShapeEig = 1e-9;      // convexity probe eigenvalue slack
inline constexpr double kStrictEscape = 1e-3;  // below this a boundary violation is tangential

}  // namespace invacheck::tols
