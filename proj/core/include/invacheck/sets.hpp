// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "invacheck/expr.hpp"
#include "invacheck/linalg.hpp"
#include "invacheck/tolerances.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

/// {x | Gx <= b}
struct Polyhedron {
  Mat G;
  Vec b;

  Polyhedron(Mat g, Vec bb);
  int dim() const { return G.cols; }
  int num_rows() const { return G.rows; }
  // b > 0 componentwise; the continuous checker requires this normal form.
  bool origin_interior() const;
};

/// {x | x'Qx <= 1}, Q symmetric positive definite (checked on construction).
struct Ellipsoid {
  Mat Q;
  Mat chol;  // lower triangular, chol * chol' = Q

  explicit Ellipsoid(Mat q);
  int dim() const { return Q.rows; }
};

enum class ConvexityStatus { CertifiedConvex, SampledConvex, Unknown };

/// {x | g(x) <= 0}.  Convexity is probed, never assumed.
struct SublevelSet {
  Expr g;
  int dim = 0;
  std::optional<Vec> interior_hint;
  ConvexityStatus convexity_status = ConvexityStatus::Unknown;

  SublevelSet(Expr g_, int dim_);
};

/// One polyhedral facet {x in P | G_i x = b_i}.
struct Face {
  const Polyhedron* parent = nullptr;
  int index = -1;
};

using CandidateSet = std::variant<Polyhedron, Ellipsoid, SublevelSet>;

int set_dim(const CandidateSet& set);

struct Containment {
  bool inside = false;
  bool domain_flag = false;  // an evaluation produced NaN
  double margin = 0.0;       // positive = amount by which containment fails
};

Containment contains_ex(const Polyhedron& p, std::span<const double> x, double tol = tols::kMembership);
Containment contains_ex(const Ellipsoid& e, std::span<const double> x, double tol = tols::kMembership);
Containment contains_ex(const SublevelSet& s, std::span<const double> x, double tol = tols::kMembership);
Containment contains_ex(const CandidateSet& set, std::span<const double> x, double tol = tols::kMembership);
bool contains(const CandidateSet& set, std::span<const double> x, double tol = tols::kMembership);

struct Region {
  enum class Kind { Interior, Boundary, Face };
  Kind kind = Kind::Interior;
  int face_index = -1;

  static Region interior() { return {Kind::Interior, -1}; }
  static Region boundary() { return {Kind::Boundary, -1}; }
  static Region face(int i) { return {Kind::Face, i}; }
};

/// Strictly interior point found by a Chebyshev-center LP; throws EmptyRegion
/// when the polyhedron has no interior (or is empty).
Vec interior_point(const Polyhedron& p);

/// Relative-interior point of face i; throws EmptyRegion when the face is empty.
Vec face_interior_point(const Polyhedron& p, int face);

/// Deterministic samples; every boundary/face sample meets its defining
/// equality within tols::kBoundaryEq and all inequalities within the same.
std::vector<Vec> sample(const Polyhedron& p, Region region, int count, std::uint64_t seed);
std::vector<Vec> sample(const Ellipsoid& e, Region region, int count, std::uint64_t seed);
std::vector<Vec> sample(const SublevelSet& s, Region region, int count, std::uint64_t seed);
std::vector<Vec> sample(const CandidateSet& set, Region region, int count, std::uint64_t seed);

}  // namespace invacheck
