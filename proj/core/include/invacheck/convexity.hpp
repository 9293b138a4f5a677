// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "invacheck/expr.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

enum class ShapeVerdict { Convex, Concave, Affine, Indefinite };
enum class ShapeCertainty { Certified, Sampled };

struct ShapeWitness {
  Vec point;
  double min_eigenvalue = 0.0;  // Hessian spectrum at `point`
  double max_eigenvalue = 0.0;
};

struct ShapeReport {
  ShapeVerdict verdict = ShapeVerdict::Indefinite;
  ShapeCertainty certainty = ShapeCertainty::Sampled;
  std::optional<ShapeWitness> witness;  // present for Indefinite
  double min_eigenvalue_seen = 0.0;
  double max_eigenvalue_seen = 0.0;
  int samples_used = 0;
  int invalid_samples = 0;
  std::string target;  // free-form label for reports
};

const char* to_string(ShapeVerdict v);
const char* to_string(ShapeCertainty c);

/// Classifies the curvature of `e` over `box`.  A constant symbolic Hessian
/// gives a Certified verdict from one eigen decomposition; otherwise the
/// Hessian is sampled at `samples` low-discrepancy points (NaN points are
/// skipped and counted; DomainError when every sample is NaN).
ShapeReport probe(const Expr& e, const Box& box, int samples = 512, std::uint64_t seed = 0);

}  // namespace invacheck
