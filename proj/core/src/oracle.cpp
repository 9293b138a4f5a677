// SPDX-License-Identifier: Apache-2.0
#include "invacheck/oracle.hpp"

#include <cmath>

#include "invacheck/tolerances.hpp"

namespace invacheck {

namespace {

bool all_finite(const Vec& v) {
  for (double c : v)
    if (std::isnan(c)) return false;
  return true;
}

}  // namespace

EscapeReport iterate_discrete(const VectorField& f, const Vec& x0, int steps,
                              const CandidateSet& set) {
  if (!contains(set, x0, tols::kMembership))
    throw UsageError("start point is not in the candidate set");
  EscapeReport rep;
  rep.start = x0;
  Vec x = x0;
  for (int k = 1; k <= steps; ++k) {
    Vec next = f.eval(x);
    if (!all_finite(next)) {
      rep.domain_event = true;
      rep.step = k;
      rep.point = x;  // last finite state
      rep.margin = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    const Containment c = contains_ex(set, next, tols::kEscape);
    if (c.domain_flag) {
      rep.domain_event = true;
      rep.step = k;
      rep.point = next;
      rep.margin = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    if (!c.inside) {
      rep.escaped = true;
      rep.step = k;
      rep.point = next;
      rep.margin = c.margin;
      return rep;
    }
    x = std::move(next);
  }
  rep.point = x;
  return rep;
}

EscapeReport integrate_rk4(const VectorField& fc, const Vec& x0, double T, double h,
                           const CandidateSet& set) {
  if (!(h > 0.0) || !(T >= h)) throw UsageError("need h > 0 and T >= h");
  if (!contains(set, x0, tols::kMembership))
    throw UsageError("start point is not in the candidate set");
  EscapeReport rep;
  rep.start = x0;
  Vec x = x0;
  const int steps = static_cast<int>(std::llround(T / h));
  const std::size_t n = x.size();
  Vec k1, k2, k3, k4, tmp(n);
  for (int k = 1; k <= steps; ++k) {
    k1 = fc.eval(x);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
    k2 = fc.eval(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
    k3 = fc.eval(tmp);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * k3[j];
    k4 = fc.eval(tmp);
    Vec next(n);
    for (std::size_t j = 0; j < n; ++j)
      next[j] = x[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    const double t = k * h;
    if (!all_finite(next)) {
      rep.domain_event = true;
      rep.step = k;
      rep.time = t;
      rep.point = x;
      rep.margin = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    const Containment c = contains_ex(set, next, tols::kEscape);
    if (c.domain_flag) {
      rep.domain_event = true;
      rep.step = k;
      rep.time = t;
      rep.point = next;
      rep.margin = std::numeric_limits<double>::quiet_NaN();
      return rep;
    }
    if (!c.inside) {
      rep.escaped = true;
      rep.step = k;
      rep.time = t;
      rep.point = next;
      rep.margin = c.margin;
      return rep;
    }
    x = std::move(next);
  }
  rep.point = x;
  rep.time = steps * h;
  return rep;
}

FalsifyOutcome falsify(const CandidateSet& set, SystemKind kind, const VectorField& f,
                       int n_samples, double horizon, std::uint64_t seed) {
  FalsifyOutcome out;
  std::vector<Vec> starts;
  try {
    starts = sample(set, Region::interior(), n_samples / 2, seed);
  } catch (const Error&) {
  }
  // boundary-adjacent starts: boundary samples pulled slightly inward
  try {
    const Vec center = std::visit(
        [](const auto& s) -> Vec {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Polyhedron>)
            return interior_point(s);
          else if constexpr (std::is_same_v<T, Ellipsoid>)
            return Vec(static_cast<std::size_t>(s.dim()), 0.0);
          else
            return s.interior_hint ? *s.interior_hint : Vec(static_cast<std::size_t>(s.dim), 0.0);
        },
        set);
    auto boundary = sample(set, Region::boundary(), n_samples - n_samples / 2, seed + 1);
    for (Vec& x : boundary) {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += 1e-4 * (center[j] - x[j]);
      starts.push_back(std::move(x));
    }
  } catch (const Error&) {
  }

  for (const Vec& x0 : starts) {
    if (!contains(set, x0, tols::kMembership)) continue;
    ++out.samples;
    EscapeReport rep;
    if (kind == SystemKind::Discrete)
      rep = iterate_discrete(f, x0, static_cast<int>(horizon), set);
    else
      rep = integrate_rk4(f, x0, horizon, 0.01, set);
    if (rep.domain_event) ++out.domain_events;
    if (rep.escaped) {
      out.escape = std::move(rep);
      return out;
    }
  }
  return out;
}

}  // namespace invacheck
