// SPDX-License-Identifier: Apache-2.0
#include "invacheck/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "invacheck/linalg.hpp"
#include "invacheck/rng.hpp"
#include "invacheck/tolerances.hpp"

namespace invacheck {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_value(const ScalarFunction& f, std::span<const double> x) {
  const double v = f.value(x);
  return std::isnan(v) ? kInf : v;
}
}  // namespace

Vec fd_gradient(const std::function<double(std::span<const double>)>& f, std::span<const double> x) {
  Vec g(x.size());
  Vec p(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    const double xi = p[i];
    p[i] = xi + h;
    const double fp = f(p);
    p[i] = xi - h;
    const double fm = f(p);
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

ScalarFunction make_function(const Expr& e, int dim) {
  std::vector<Expr> grad;
  grad.reserve(static_cast<std::size_t>(dim));
  for (int i = 1; i <= dim; ++i) grad.push_back(e.derivative(i));
  ScalarFunction f;
  f.value = [e](std::span<const double> x) { return e.eval(x); };
  f.gradient = [grad](std::span<const double> x) {
    Vec g(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) g[i] = grad[i].eval(x);
    return g;
  };
  return f;
}

ScalarFunction make_fd_function(std::function<double(std::span<const double>)> f, int) {
  ScalarFunction sf;
  sf.value = f;
  sf.gradient = [f](std::span<const double> x) { return fd_gradient(f, x); };
  return sf;
}

namespace {

struct DescentOutcome {
  Vec x;
  double value = kInf;
  bool converged = false;
  int iters = 0;
};

// Projected gradient descent with Armijo backtracking, clamped to `box`.
DescentOutcome descend(const ScalarFunction& f, Vec x, const OptConfig& cfg) {
  DescentOutcome out;
  double fx = safe_value(f, x);
  if (!std::isfinite(fx)) {
    out.x = std::move(x);
    out.value = fx;
    return out;
  }
  double t_start = 1.0;  // warm-started across iterations
  for (int it = 0; it < cfg.max_iters; ++it) {
    ++out.iters;
    const Vec g = f.gradient ? f.gradient(x) : Vec{};
    bool g_ok = !g.empty();
    double gn2 = 0.0;
    for (double v : g) {
      if (!std::isfinite(v)) {
        g_ok = false;
        break;
      }
      gn2 += v * v;
    }
    if (!g_ok) break;
    if (std::sqrt(gn2) <= cfg.grad_tol) {
      out.converged = true;
      break;
    }
    double t = t_start;
    bool moved = false;
    while (t > 1e-18) {
      Vec cand(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) cand[j] = x[j] - t * g[j];
      cand = cfg.box.clamp(std::move(cand));
      const double fc = safe_value(f, cand);
      if (fc <= fx - cfg.armijo * t * gn2) {
        x = std::move(cand);
        fx = fc;
        moved = true;
        break;
      }
      t *= cfg.shrink;
    }
    if (!moved) break;  // stuck (box face or noise floor)
    t_start = std::min(1.0, t * 4.0);
  }
  out.x = std::move(x);
  out.value = fx;
  return out;
}

}  // namespace

OptResult minimize_multistart(const ScalarFunction& f, const OptConfig& cfg) {
  if (cfg.box.dim() < 1) throw DimensionError("optimizer box is unset");
  OptResult res;
  res.starts_used = cfg.starts;
  const std::uint64_t offset = 1 + (cfg.seed % (1ULL << 20));
  bool best_converged = false;
  for (int s = 0; s < cfg.starts; ++s) {
    Vec x0 = halton_in_box(offset + static_cast<std::uint64_t>(s), cfg.box);
    const double f0 = safe_value(f, x0);
    if (!std::isfinite(f0)) {
      ++res.invalid_starts;
      continue;
    }
    DescentOutcome d = descend(f, std::move(x0), cfg);
    res.total_iterations += d.iters;
    if (std::isnan(d.value) || d.value == kInf) continue;
    if (std::isnan(res.best_value) || d.value < res.best_value) {
      res.best_value = d.value;
      res.best_point = d.x;
      best_converged = d.converged;
    }
  }
  if (res.invalid_starts == cfg.starts || res.best_point.empty()) {
    res.status = OptStatus::AllSamplesInvalid;
    res.notes.push_back("every start evaluated to NaN");
    return res;
  }
  res.status = best_converged ? OptStatus::Converged : OptStatus::IterCap;
  return res;
}

namespace {

ScalarFunction negate(const ScalarFunction& f) {
  ScalarFunction g;
  g.value = [f](std::span<const double> x) { return -f.value(x); };
  if (f.gradient)
    g.gradient = [f](std::span<const double> x) {
      Vec v = f.gradient(x);
      for (auto& c : v) c = -c;
      return v;
    };
  return g;
}

}  // namespace

OptResult maximize_multistart(const ScalarFunction& f, const OptConfig& cfg) {
  OptResult res = minimize_multistart(negate(f), cfg);
  if (std::isfinite(res.best_value)) res.best_value = -res.best_value;
  return res;
}

OptResult minimize_from(const ScalarFunction& f, const Vec& start, const OptConfig& cfg) {
  OptResult res;
  res.starts_used = 1;
  if (std::isnan(safe_value(f, start)) || safe_value(f, start) == kInf) {
    res.invalid_starts = 1;
    res.status = OptStatus::AllSamplesInvalid;
    return res;
  }
  DescentOutcome d = descend(f, start, cfg);
  res.total_iterations = d.iters;
  res.best_point = std::move(d.x);
  res.best_value = d.value;
  res.status = d.converged ? OptStatus::Converged : OptStatus::IterCap;
  return res;
}

OptResult maximize_from(const ScalarFunction& f, const Vec& start, const OptConfig& cfg) {
  OptResult res = minimize_from(negate(f), start, cfg);
  if (std::isfinite(res.best_value)) res.best_value = -res.best_value;
  return res;
}

OptResult maximize_on_level_set(const ScalarFunction& objective, const Ellipsoid& e,
                                const OptConfig& cfg) {
  const int n = e.dim();
  OptResult res;
  res.starts_used = cfg.starts;
  res.best_value = -kInf;

  auto x_of = [&](const Vec& u) { return solve_lower_transposed(e.chol, u); };
  auto value_of = [&](const Vec& u) {
    const Vec x = x_of(u);
    const double v = objective.value(x);
    return std::isnan(v) ? -kInf : v;
  };

  bool any_valid = false;
  bool best_converged = false;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng(Rng::mix(cfg.seed, 0x5fe7ULL + static_cast<std::uint64_t>(s)));
    Vec u = rng.unit_vector(n);
    double fu = value_of(u);
    if (!std::isfinite(fu)) {
      ++res.invalid_starts;
      continue;
    }
    any_valid = true;
    bool converged = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
      ++res.total_iterations;
      const Vec x = x_of(u);
      Vec gx = objective.gradient ? objective.gradient(x) : fd_gradient(objective.value, x);
      bool ok = true;
      for (double v : gx)
        if (!std::isfinite(v)) ok = false;
      if (!ok) break;
      Vec gu = solve_lower(e.chol, gx);  // chain rule through x = L^-T u
      const double radial = dot(gu, u);
      for (std::size_t j = 0; j < gu.size(); ++j) gu[j] -= radial * u[j];
      const double gn2 = dot(gu, gu);
      if (std::sqrt(gn2) <= cfg.grad_tol) {
        converged = true;
        break;
      }
      double t = 1.0;
      bool moved = false;
      while (t > 1e-18) {
        Vec cand(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) cand[j] = u[j] + t * gu[j];
        const double cn = norm2(cand);
        for (auto& v : cand) v /= cn;  // retract to the sphere
        const double fc = value_of(cand);
        if (fc >= fu + cfg.armijo * t * gn2) {
          u = std::move(cand);
          fu = fc;
          moved = true;
          break;
        }
        t *= cfg.shrink;
      }
      if (!moved) break;
    }
    if (fu > res.best_value) {
      res.best_value = fu;
      res.best_point = x_of(u);
      best_converged = converged;
    }
  }
  if (!any_valid) {
    res.status = OptStatus::AllSamplesInvalid;
    res.notes.push_back("objective NaN on every boundary start");
    return res;
  }
  res.status = best_converged ? OptStatus::Converged : OptStatus::IterCap;
  return res;
}

namespace {

// Pulls x back to the constraint zero level along the segment from `anchor`
// (where constraint < 0) through x and beyond; empty when no crossing found.
std::optional<Vec> reproject_bisect(const Expr& constraint, const Vec& anchor, const Vec& x) {
  auto at = [&](double t) {
    Vec p(anchor.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = anchor[j] + t * (x[j] - anchor[j]);
    return p;
  };
  auto g_at = [&](double t) { return constraint.eval(at(t)); };
  double t_in = 0.0;
  if (!(g_at(0.0) < 0.0)) return std::nullopt;
  double t_out = 1.0;
  double g = g_at(t_out);
  int grow = 0;
  while (!(std::isnan(g) || g > 0.0)) {
    t_in = t_out;
    t_out *= 2.0;
    g = g_at(t_out);
    if (++grow > 60) return std::nullopt;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (t_in + t_out);
    const double gm = g_at(mid);
    if (!std::isnan(gm) && std::abs(gm) <= tols::kBoundaryEq) return at(mid);
    if (std::isnan(gm) || gm > 0.0)
      t_out = mid;
    else
      t_in = mid;
  }
  return std::nullopt;
}

}  // namespace

OptResult maximize_on_level_set(const ScalarFunction& objective, const Expr& constraint,
                                const SublevelSet& region, const OptConfig& cfg) {
  const int n = region.dim;
  OptResult res;
  res.best_value = -kInf;

  const int n_starts = std::max(4, cfg.starts / 4);
  std::vector<Vec> starts = sample(region, Region::boundary(), n_starts, cfg.seed);
  res.starts_used = static_cast<int>(starts.size());

  const Vec anchor = region.interior_hint ? *region.interior_hint : Vec(static_cast<std::size_t>(n), 0.0);

  for (Vec& x : starts) {
    // penalty ascent with increasing weights, warm-started
    for (const double rho : {1e3, 1e4, 1e5}) {
      ScalarFunction pen;
      pen.value = [&, rho](std::span<const double> p) {
        const double v = objective.value(p);
        const double c = constraint.eval(p);
        if (std::isnan(v) || std::isnan(c)) return std::numeric_limits<double>::quiet_NaN();
        return -(v - rho * c * c);  // minimize the negation
      };
      pen.gradient = [&](std::span<const double> p) { return fd_gradient(pen.value, p); };
      OptConfig local = cfg;
      local.max_iters = cfg.max_iters / 2;
      DescentOutcome d = descend(pen, x, local);
      res.total_iterations += d.iters;
      if (std::isfinite(d.value)) x = std::move(d.x);
    }
    const auto projected = reproject_bisect(constraint, anchor, x);
    const Vec& final_x = projected ? *projected : x;
    const double v = objective.value(final_x);
    if (std::isnan(v)) {
      ++res.invalid_starts;
      continue;
    }
    if (v > res.best_value) {
      res.best_value = v;
      res.best_point = final_x;
    }
  }
  if (res.best_point.empty()) {
    res.status = OptStatus::AllSamplesInvalid;
    res.notes.push_back("no boundary start produced a finite objective");
    return res;
  }
  res.status = OptStatus::Converged;
  return res;
}

OptResult minimize_over_set(const ScalarFunction& f, const CandidateSet& set, const OptConfig& cfg) {
  OptResult res;
  res.best_value = kInf;

  // dense rejection pass over interior and boundary samples
  const int n_dense = std::max(cfg.starts * 8, 256);
  std::vector<Vec> pool;
  try {
    pool = sample(set, Region::interior(), n_dense / 2, cfg.seed);
  } catch (const Error&) {
  }
  try {
    auto bd = sample(set, Region::boundary(), n_dense / 2, cfg.seed + 1);
    pool.insert(pool.end(), bd.begin(), bd.end());
  } catch (const Error&) {
  }
  if (pool.empty()) throw EmptyRegion("no feasible samples available for restricted minimization");
  res.starts_used = static_cast<int>(pool.size());

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double v = f.value(pool[i]);
    if (std::isnan(v)) {
      ++res.invalid_starts;
      continue;
    }
    scored.emplace_back(v, i);
    if (v < res.best_value) {
      res.best_value = v;
      res.best_point = pool[i];
    }
  }
  if (scored.empty()) {
    res.status = OptStatus::AllSamplesInvalid;
    res.notes.push_back("objective NaN at every feasible sample");
    return res;
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // penalized descent from the most promising samples
  const double rho = 1e6;
  ScalarFunction pen;
  pen.value = [&](std::span<const double> p) {
    const double v = f.value(p);
    const Containment c = contains_ex(set, p, 0.0);
    if (std::isnan(v) || c.domain_flag) return std::numeric_limits<double>::quiet_NaN();
    const double viol = std::max(0.0, c.margin);
    return v + rho * viol * viol;
  };
  pen.gradient = [&](std::span<const double> p) {
    const Containment c = contains_ex(set, p, 0.0);
    if (!c.domain_flag && c.margin < 0.0 && f.gradient) return f.gradient(p);  // strictly inside
    return fd_gradient(pen.value, p);
  };

  const int n_descents = std::min<int>(static_cast<int>(scored.size()), std::max(4, cfg.starts / 8));
  bool converged = false;
  // anchor for feasibility restoration: best strictly feasible sample
  const Vec anchor = res.best_point;
  for (int k = 0; k < n_descents; ++k) {
    DescentOutcome d = descend(pen, pool[scored[static_cast<std::size_t>(k)].second], cfg);
    res.total_iterations += d.iters;
    if (!std::isfinite(d.value)) continue;
    Vec x = std::move(d.x);
    Containment c = contains_ex(set, x, tols::kBoundaryEq);
    if (!c.inside) {
      // bisect toward the anchor until feasible again
      Vec lo = anchor;
      Vec hi = x;
      bool fixed = false;
      for (int it = 0; it < 200; ++it) {
        Vec mid(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) mid[j] = 0.5 * (lo[j] + hi[j]);
        const Containment cm = contains_ex(set, mid, tols::kBoundaryEq);
        if (cm.inside && cm.margin > -1e-7) {
          x = std::move(mid);
          fixed = true;
          break;
        }
        if (cm.inside)
          lo = std::move(mid);
        else
          hi = std::move(mid);
      }
      if (!fixed) {
        x = lo;
        if (!contains_ex(set, x, tols::kBoundaryEq).inside) continue;
      }
    }
    const double v = f.value(x);
    if (std::isnan(v)) continue;
    if (v < res.best_value) {
      res.best_value = v;
      res.best_point = std::move(x);
      converged = d.converged;
    }
  }
  res.status = converged ? OptStatus::Converged : OptStatus::IterCap;
  return res;
}

MaximinResult maximin_scalar(double lo, double hi, const std::function<OptResult(double)>& inner,
                             int grid, int refine) {
  if (!(hi >= lo)) throw ArithmeticError("empty multiplier range");
  if (grid < 3) grid = 3;
  if (refine < 1) refine = 1;

  MaximinResult out;
  bool have_best = false;
  double best_t = lo;
  auto value_of = [](const OptResult& r) {
    return r.status == OptStatus::AllSamplesInvalid ? -kInf : r.best_value;
  };
  auto consider = [&](double t, OptResult r) {
    const double v = value_of(r);
    out.trace.emplace_back(t, v);
    if (!have_best || v > value_of(out.inner)) {
      have_best = true;
      best_t = t;
      out.inner = std::move(r);
    }
  };

  if (hi == lo) {
    consider(lo, inner(lo));
    out.multiplier = lo;
    return out;
  }

  int best_idx = 0;
  {
    double best_v = -kInf;
    for (int k = 0; k < grid; ++k) {
      const double t = lo + (hi - lo) * k / (grid - 1);
      OptResult r = inner(t);
      const double v = value_of(r);
      if (v > best_v) {
        best_v = v;
        best_idx = k;
      }
      consider(t, std::move(r));
    }
  }

  // golden-section refinement around the best grid point
  const double step = (hi - lo) / (grid - 1);
  double a = std::max(lo, lo + (best_idx - 1) * step);
  double b = std::min(hi, lo + (best_idx + 1) * step);
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  OptResult r1 = inner(x1);
  OptResult r2 = inner(x2);
  double v1 = value_of(r1);
  double v2 = value_of(r2);
  consider(x1, r1);
  consider(x2, r2);
  const int iters = 12 * refine;
  for (int it = 0; it < iters && (b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
    if (v1 >= v2) {
      b = x2;
      x2 = x1;
      v2 = v1;
      x1 = b - invphi * (b - a);
      r1 = inner(x1);
      v1 = value_of(r1);
      consider(x1, r1);
    } else {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + invphi * (b - a);
      r2 = inner(x2);
      v2 = value_of(r2);
      consider(x2, r2);
    }
  }
  out.multiplier = best_t;
  return out;
}

}  // namespace invacheck
