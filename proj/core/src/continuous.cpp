// SPDX-License-Identifier: Apache-2.0
#include "invacheck/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invacheck/compose.hpp"
#include "invacheck/oracle.hpp"
#include "invacheck/tolerances.hpp"

namespace invacheck {

namespace {

std::string format_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Verdict assembly shared by the three checks; `max` is the boundary maximum
// of the outward component.
void finish_verdict(CheckVerdict& verdict, const CandidateSet& set, const VectorField& fc,
                    double max, const Vec& maximizer) {
  if (max <= tols::kResidual) {
    verdict.status = CheckStatus::Verified;
    return;
  }
  verdict.status = CheckStatus::Falsified;
  verdict.counterexample = maximizer;
  if (max > tols::kStrictEscape) {
    // strict violation: confirm dynamically with a short trajectory
    try {
      const EscapeReport rep = integrate_rk4(fc, maximizer, 1.0, 0.01, set);
      if (rep.escaped)
        verdict.notes.push_back("trajectory from the witness leaves the set at t = " +
                                format_num(rep.time));
      else if (rep.domain_event)
        verdict.notes.push_back("trajectory from the witness hits a domain boundary");
      else
        verdict.notes.push_back("trajectory confirmation inconclusive within t <= 1");
    } catch (const UsageError&) {
      verdict.notes.push_back("witness lies outside membership tolerance; no trajectory run");
    }
  } else {
    verdict.notes.push_back(
        "boundary-tangential violation (max <= 1e-3); trajectory confirmation skipped");
  }
}

}  // namespace

CheckVerdict check_polyhedron_continuous(const Polyhedron& p, const VectorField& fc,
                                         const OptConfig& cfg_in) {
  const int n = p.dim();
  if (fc.dim != n) throw DimensionError("field dimension does not match the polyhedron");
  if (!p.origin_interior())
    throw OriginNotInterior("continuous polyhedral check needs b > 0 (origin in the interior)");
  OptConfig cfg = cfg_in;
  if (cfg.box.dim() != n) cfg.box = Box::symmetric(n);

  CheckVerdict verdict;
  BoundaryReport report;
  report.overall_max = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < p.num_rows(); ++i) {
    FaceOutcome face;
    face.face = i;
    std::vector<Vec> pts;
    try {
      pts = sample(p, Region::face(i), std::max(16, cfg.starts / 2), cfg.seed + static_cast<std::uint64_t>(i));
    } catch (const EmptyRegion&) {
      face.empty = true;
      verdict.notes.push_back("face " + std::to_string(i + 1) + " is empty (vacuous)");
      report.faces.push_back(std::move(face));
      continue;
    }
    face.samples = static_cast<int>(pts.size());

    const Expr obj = field_dot(p.G.row(i), fc);
    const ScalarFunction obj_fn = make_function(obj, n);

    double best = -std::numeric_limits<double>::infinity();
    Vec best_x;
    for (const Vec& x : pts) {
      const double v = obj.eval(x);
      if (std::isnan(v)) continue;
      if (v > best) {
        best = v;
        best_x = x;
      }
    }

    // penalty ascent pinned to the face plane, staying inside P
    const Vec gi = p.G.row(i);
    const double bi = p.b[static_cast<std::size_t>(i)];
    for (const double rho : {1e3, 1e4, 1e5}) {
      ScalarFunction pen;
      pen.value = [&, rho](std::span<const double> q) {
        const double v = obj.eval(q);
        if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
        double gq = 0.0;
        for (int j = 0; j < n; ++j) gq += gi[static_cast<std::size_t>(j)] * q[j];
        double pen_sum = (gq - bi) * (gq - bi);
        for (int r = 0; r < p.num_rows(); ++r) {
          if (r == i) continue;
          double rq = 0.0;
          for (int j = 0; j < n; ++j) rq += p.G(r, j) * q[j];
          const double viol = std::max(0.0, rq - p.b[static_cast<std::size_t>(r)]);
          pen_sum += viol * viol;
        }
        return v - rho * pen_sum;
      };
      pen.gradient = [&pen](std::span<const double> q) { return fd_gradient(pen.value, q); };
      if (best_x.empty()) break;
      const OptResult res = maximize_from(pen, best_x, cfg);
      if (res.status != OptStatus::AllSamplesInvalid && !res.best_point.empty())
        best_x = res.best_point;
    }
    if (!best_x.empty()) {
      // exact projection back onto the face plane, then a feasibility pull
      double gx = 0.0;
      const double g2 = dot(gi, gi);
      for (int j = 0; j < n; ++j) gx += gi[static_cast<std::size_t>(j)] * best_x[static_cast<std::size_t>(j)];
      for (int j = 0; j < n; ++j)
        best_x[static_cast<std::size_t>(j)] += (bi - gx) / g2 * gi[static_cast<std::size_t>(j)];
      Containment c = contains_ex(CandidateSet{p}, best_x, tols::kBoundaryEq);
      if (!c.inside) {
        // bisect within the face plane toward its relative-interior anchor
        Vec anchor = face_interior_point(p, i);
        Vec lo = anchor;
        Vec hi = best_x;
        for (int it = 0; it < 100; ++it) {
          Vec mid(hi.size());
          for (std::size_t j = 0; j < hi.size(); ++j) mid[j] = 0.5 * (lo[j] + hi[j]);
          if (contains_ex(CandidateSet{p}, mid, tols::kBoundaryEq).inside)
            lo = std::move(mid);
          else
            hi = std::move(mid);
        }
        best_x = lo;
      }
      const double v = obj.eval(best_x);
      if (!std::isnan(v) && v > best) best = v;
      face.maximizer = best_x;
    }
    face.max_value = best;
    if (best > report.overall_max) {
      report.overall_max = best;
      report.maximizer = face.maximizer.empty() ? best_x : face.maximizer;
    }
    verdict.residual_minima.push_back(-best);
    report.faces.push_back(std::move(face));
  }

  if (!std::isfinite(report.overall_max)) {
    verdict.status = CheckStatus::Verified;
    verdict.notes.push_back("every face is empty; invariance holds vacuously");
    verdict.boundary = std::move(report);
    return verdict;
  }
  const double overall = report.overall_max;
  const Vec maximizer = report.maximizer;
  verdict.boundary = std::move(report);
  finish_verdict(verdict, CandidateSet{p}, fc, overall, maximizer);
  return verdict;
}

CheckVerdict check_ellipsoid_continuous(const Ellipsoid& e, const VectorField& fc,
                                        const OptConfig& cfg_in) {
  const int n = e.dim();
  if (fc.dim != n) throw DimensionError("field dimension does not match the ellipsoid");
  OptConfig cfg = cfg_in;
  if (cfg.box.dim() != n) cfg.box = Box::symmetric(n);

  // objective f(x)'Qx assembled symbolically
  Expr obj = Expr::constant(0.0);
  for (int i = 0; i < n; ++i)
    obj = obj + fc.components[static_cast<std::size_t>(i)] * linear_form(e.Q.row(i));

  const OptResult res = maximize_on_level_set(make_function(obj, n), e, cfg);
  CheckVerdict verdict;
  if (res.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("objective not evaluable on the boundary");
    return verdict;
  }
  BoundaryReport report;
  FaceOutcome whole;
  whole.max_value = res.best_value;
  whole.maximizer = res.best_point;
  whole.samples = res.starts_used;
  report.overall_max = res.best_value;
  report.maximizer = res.best_point;
  report.faces.push_back(std::move(whole));
  verdict.residual_minima.push_back(-res.best_value);
  verdict.boundary = std::move(report);
  finish_verdict(verdict, CandidateSet{e}, fc, res.best_value, res.best_point);
  return verdict;
}

CheckVerdict check_sublevel_continuous(const SublevelSet& s, const VectorField& fc,
                                       const OptConfig& cfg_in) {
  const int n = s.dim;
  if (fc.dim != n) throw DimensionError("field dimension does not match the set");
  OptConfig cfg = cfg_in;
  if (cfg.box.dim() != n) cfg.box = Box::symmetric(n);

  CheckVerdict verdict;
  {
    ShapeReport rep = probe(s.g, cfg.box, 512, cfg.seed);
    rep.target = "g convexity (set must be convex)";
    verdict.hypotheses.push_back(std::move(rep));
  }

  // objective (grad g)'f assembled symbolically
  Expr obj = Expr::constant(0.0);
  for (int i = 1; i <= n; ++i)
    obj = obj + s.g.derivative(i) * fc.components[static_cast<std::size_t>(i - 1)];

  OptResult res;
  try {
    res = maximize_on_level_set(make_function(obj, n), s.g, s, cfg);
  } catch (const NoBoundaryFound&) {
    verdict.status = CheckStatus::Verified;
    verdict.notes.push_back("no boundary found in the search region; invariance holds vacuously");
    return verdict;
  }
  if (res.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("objective not evaluable on the boundary");
    return verdict;
  }

  BoundaryReport report;
  FaceOutcome whole;
  whole.max_value = res.best_value;
  whole.maximizer = res.best_point;
  whole.samples = res.starts_used;
  report.overall_max = res.best_value;
  report.maximizer = res.best_point;
  report.faces.push_back(std::move(whole));
  verdict.residual_minima.push_back(-res.best_value);
  verdict.boundary = std::move(report);
  finish_verdict(verdict, CandidateSet{s}, fc, res.best_value, res.best_point);

  // a failed convexity hypothesis caps VERIFIED at INCONCLUSIVE
  if (verdict.status == CheckStatus::Verified) {
    const auto& h = verdict.hypotheses.front();
    if (h.verdict != ShapeVerdict::Convex && h.verdict != ShapeVerdict::Affine) {
      verdict.status = CheckStatus::Inconclusive;
      verdict.notes.push_back("set convexity hypothesis not satisfied; condition holds on samples");
    } else if (h.certainty == ShapeCertainty::Sampled) {
      verdict.notes.push_back("set convexity sampled, not certified");
    }
  }
  return verdict;
}

}  // namespace invacheck
