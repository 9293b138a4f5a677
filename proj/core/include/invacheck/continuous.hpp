// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "invacheck/expr.hpp"
#include "invacheck/optimize.hpp"
#include "invacheck/sets.hpp"
#include "invacheck/verdict.hpp"

namespace invacheck {

// Tangent-cone invariance checks for dx/dt = f(x): the field must not point
// outward anywhere on the boundary.  Each check is a boundary maximization;
// the verdict carries a BoundaryReport with per-face (or overall) maxima.
// A strict violation (max > 1e-3) is confirmed by a short trajectory run;
// values in (1e-7, 1e-3] are falsified by the condition but flagged as
// boundary-tangential.

/// Per-face condition g_i'f(x) <= 0 on {x in P | g_i'x = b_i}.  Requires the
/// origin-interior normal form b > 0 (OriginNotInterior otherwise).
CheckVerdict check_polyhedron_continuous(const Polyhedron& p, const VectorField& fc,
                                         const OptConfig& cfg);

/// Boundary condition f(x)'Qx <= 0 on x'Qx = 1.
CheckVerdict check_ellipsoid_continuous(const Ellipsoid& e, const VectorField& fc,
                                        const OptConfig& cfg);

/// Boundary condition (grad g(x))'f(x) <= 0 on g(x) = 0; set convexity is
/// probed and attached (the equivalence needs it).
CheckVerdict check_sublevel_continuous(const SublevelSet& s, const VectorField& fc,
                                       const OptConfig& cfg);

}  // namespace invacheck
