// SPDX-License-Identifier: Apache-2.0
#include "invacheck/convexity.hpp"

#include <cmath>

#include "invacheck/linalg.hpp"
#include "invacheck/rng.hpp"
#include "invacheck/tolerances.hpp"

namespace invacheck {

const char* to_string(ShapeVerdict v) {
  switch (v) {
    case ShapeVerdict::Convex:
      return "convex";
    case ShapeVerdict::Concave:
      return "concave";
    case ShapeVerdict::Affine:
      return "affine";
    case ShapeVerdict::Indefinite:
      return "indefinite";
  }
  return "?";
}

const char* to_string(ShapeCertainty c) {
  return c == ShapeCertainty::Certified ? "certified" : "sampled";
}

namespace {

ShapeVerdict classify(double min_eig, double max_eig) {
  const bool convex_ok = min_eig >= -tols::kShapeEig;
  const bool concave_ok = max_eig <= tols::kShapeEig;
  if (convex_ok && concave_ok) return ShapeVerdict::Affine;
  if (convex_ok) return ShapeVerdict::Convex;
  if (concave_ok) return ShapeVerdict::Concave;
  return ShapeVerdict::Indefinite;
}

}  // namespace

ShapeReport probe(const Expr& e, const Box& box, int samples, std::uint64_t seed) {
  if (samples < 1) throw DimensionError("sample count must be >= 1");
  const int n = box.dim();
  const Derivatives d = derivatives(e, n);

  bool constant_hessian = true;
  for (const auto& row : d.hessian)
    for (const auto& h : row)
      if (!h.is_constant()) constant_hessian = false;

  ShapeReport rep;
  if (constant_hessian) {
    Mat h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h(i, j) = d.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].constant_value();
    const EigenResult eig = sym_eigen(h);
    rep.certainty = ShapeCertainty::Certified;
    rep.samples_used = 0;
    rep.min_eigenvalue_seen = eig.values.back();
    rep.max_eigenvalue_seen = eig.values.front();
    rep.verdict = classify(eig.values.back(), eig.values.front());
    if (rep.verdict == ShapeVerdict::Indefinite)
      rep.witness = ShapeWitness{Vec(static_cast<std::size_t>(n), 0.0), eig.values.back(), eig.values.front()};
    return rep;
  }

  rep.certainty = ShapeCertainty::Sampled;
  double min_eig = std::numeric_limits<double>::infinity();
  double max_eig = -std::numeric_limits<double>::infinity();
  ShapeWitness min_witness;
  const std::uint64_t offset = 1 + (seed % (1ULL << 20));
  Mat h(n, n);
  int valid = 0;
  for (int k = 0; k < samples; ++k) {
    const Vec x = halton_in_box(offset + static_cast<std::uint64_t>(k), box);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i; j < n && ok; ++j) {
        const double v = d.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
        if (std::isnan(v)) ok = false;
        h(i, j) = v;
        h(j, i) = v;
      }
    if (!ok) {
      ++rep.invalid_samples;
      continue;
    }
    ++valid;
    const EigenResult eig = sym_eigen(h);
    if (eig.values.back() < min_eig) {
      min_eig = eig.values.back();
      min_witness = ShapeWitness{x, eig.values.back(), eig.values.front()};
    }
    max_eig = std::max(max_eig, eig.values.front());
  }
  rep.samples_used = valid;
  if (valid == 0) throw DomainError("every probe sample evaluated to NaN");
  rep.min_eigenvalue_seen = min_eig;
  rep.max_eigenvalue_seen = max_eig;
  rep.verdict = classify(min_eig, max_eig);
  if (rep.verdict == ShapeVerdict::Indefinite) rep.witness = min_witness;
  return rep;
}

}  // namespace invacheck
