// SPDX-License-Identifier: Apache-2.0
#include "invacheck/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invacheck/lp.hpp"
#include "invacheck/rng.hpp"

namespace invacheck {

namespace {
constexpr double kRayCap = 1e4;  // hit-and-run chord cap on unbounded sets
}

Polyhedron::Polyhedron(Mat g, Vec bb) : G(std::move(g)), b(std::move(bb)) {
  if (static_cast<int>(b.size()) != G.rows) throw DimensionError("b length must equal row count of G");
  for (double v : b)
    if (!std::isfinite(v)) throw ArithmeticError("b entries must be finite");
}

bool Polyhedron::origin_interior() const {
  return std::all_of(b.begin(), b.end(), [](double v) { return v > 0.0; });
}

Ellipsoid::Ellipsoid(Mat q) : Q(std::move(q)) {
  if (Q.rows != Q.cols) throw DimensionError("Q must be square");
  if (!is_symmetric(Q)) throw NotPositiveDefinite("Q must be symmetric");
  const EigenResult eig = sym_eigen(Q);
  if (eig.values.back() <= tols::kMinEigenvalue)
    throw NotPositiveDefinite("Q has an eigenvalue below threshold");
  chol = cholesky(Q);
}

SublevelSet::SublevelSet(Expr g_, int dim_) : g(std::move(g_)), dim(dim_) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  if (g.max_var_index() > dim) throw DimensionError("g uses a variable beyond dim");
}

int set_dim(const CandidateSet& set) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SublevelSet>)
          return s.dim;
        else
          return s.dim();
      },
      set);
}

Containment contains_ex(const Polyhedron& p, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != p.dim()) throw DimensionError("point dimension mismatch");
  Containment c;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.num_rows(); ++i) {
    double gx = 0.0;
    for (int j = 0; j < p.dim(); ++j) gx += p.G(i, j) * x[static_cast<std::size_t>(j)];
    const double viol = gx - p.b[static_cast<std::size_t>(i)];
    if (std::isnan(viol)) {
      c.domain_flag = true;
      c.inside = false;
      c.margin = std::numeric_limits<double>::quiet_NaN();
      return c;
    }
    worst = std::max(worst, viol);
  }
  c.margin = worst;
  c.inside = worst <= tol;
  return c;
}

Containment contains_ex(const Ellipsoid& e, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != e.dim()) throw DimensionError("point dimension mismatch");
  Containment c;
  double q = 0.0;
  for (int i = 0; i < e.dim(); ++i)
    for (int j = 0; j < e.dim(); ++j) q += x[static_cast<std::size_t>(i)] * e.Q(i, j) * x[static_cast<std::size_t>(j)];
  if (std::isnan(q)) {
    c.domain_flag = true;
    c.margin = q;
    return c;
  }
  c.margin = q - 1.0;
  c.inside = c.margin <= tol;
  return c;
}

Containment contains_ex(const SublevelSet& s, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != s.dim) throw DimensionError("point dimension mismatch");
  Containment c;
  const double g = s.g.eval(x);
  if (std::isnan(g)) {
    c.domain_flag = true;
    c.margin = g;
    return c;
  }
  c.margin = g;
  c.inside = g <= tol;
  return c;
}

Containment contains_ex(const CandidateSet& set, std::span<const double> x, double tol) {
  return std::visit([&](const auto& s) { return contains_ex(s, x, tol); }, set);
}

bool contains(const CandidateSet& set, std::span<const double> x, double tol) {
  return contains_ex(set, x, tol).inside;
}

Vec interior_point(const Polyhedron& p) {
  LpBuilder lp;
  std::vector<int> xs;
  for (int j = 0; j < p.dim(); ++j) xs.push_back(lp.add_var(-LpBuilder::kInf, LpBuilder::kInf, 0.0));
  const int r = lp.add_var(0.0, 1.0, -1.0);  // maximize the inscribed-ball radius
  for (int i = 0; i < p.num_rows(); ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < p.dim(); ++j) terms.emplace_back(xs[static_cast<std::size_t>(j)], p.G(i, j));
    terms.emplace_back(r, norm2(p.G.row(i)));
    lp.add_le(std::move(terms), p.b[static_cast<std::size_t>(i)]);
  }
  const auto sol = lp.solve();
  if (sol.status != LpStatus::Optimal) throw EmptyRegion("polyhedron is empty");
  if (sol.x.back() <= 1e-10) throw EmptyRegion("polyhedron has no interior point");
  return Vec(sol.x.begin(), sol.x.end() - 1);
}

namespace {

// component of v orthogonal to unit vector u
Vec project_out(Vec v, const Vec& u) {
  const double c = dot(v, u);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
  return v;
}

Vec unit_normal(const Polyhedron& p, int face) {
  Vec g = p.G.row(face);
  const double n = norm2(g);
  if (n <= 0.0) throw DimensionError("face normal is zero");
  for (auto& v : g) v /= n;
  return g;
}

void reproject_to_face(const Polyhedron& p, int face, Vec& x) {
  double gx = 0.0;
  const double gnorm2 = dot(p.G.row(face), p.G.row(face));
  for (int j = 0; j < p.dim(); ++j) gx += p.G(face, j) * x[static_cast<std::size_t>(j)];
  const double shift = (p.b[static_cast<std::size_t>(face)] - gx) / gnorm2;
  for (int j = 0; j < p.dim(); ++j) x[static_cast<std::size_t>(j)] += shift * p.G(face, j);
}

// chord of P through x along d, restricted to rows != skip_row
std::pair<double, double> chord_range(const Polyhedron& p, const Vec& x, const Vec& d, int skip_row) {
  double tlo = -kRayCap;
  double thi = kRayCap;
  for (int i = 0; i < p.num_rows(); ++i) {
    if (i == skip_row) continue;
    double gd = 0.0;
    double gx = 0.0;
    for (int j = 0; j < p.dim(); ++j) {
      gd += p.G(i, j) * d[static_cast<std::size_t>(j)];
      gx += p.G(i, j) * x[static_cast<std::size_t>(j)];
    }
    const double slack = p.b[static_cast<std::size_t>(i)] - gx;
    if (std::abs(gd) < 1e-14) continue;
    const double t = slack / gd;
    if (gd > 0.0)
      thi = std::min(thi, t);
    else
      tlo = std::max(tlo, t);
  }
  return {tlo, thi};
}

std::vector<Vec> hit_and_run_polyhedron(const Polyhedron& p, int face, int count, std::uint64_t seed) {
  Vec x = face < 0 ? interior_point(p) : face_interior_point(p, face);
  Vec normal;
  if (face >= 0) normal = unit_normal(p, face);
  Rng rng(Rng::mix(seed, face < 0 ? 0xfeed : static_cast<std::uint64_t>(face) + 1));

  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  const int burnin = 16;
  const int stride = 4;
  int steps_done = 0;
  while (static_cast<int>(out.size()) < count) {
    Vec d = rng.unit_vector(p.dim());
    if (face >= 0) {
      d = project_out(std::move(d), normal);
      const double n = norm2(d);
      if (n < 1e-12) continue;  // direction parallel to the normal; redraw
      for (auto& v : d) v /= n;
    }
    auto [tlo, thi] = chord_range(p, x, d, face);
    if (!(thi > tlo)) continue;
    const double u = 0.01 + 0.98 * rng.uniform();
    const double t = tlo + (thi - tlo) * u;
    for (int j = 0; j < p.dim(); ++j) x[static_cast<std::size_t>(j)] += t * d[static_cast<std::size_t>(j)];
    if (face >= 0) reproject_to_face(p, face, x);
    ++steps_done;
    if (steps_done > burnin && steps_done % stride == 0) out.push_back(x);
  }
  return out;
}

std::vector<int> nonempty_faces(const Polyhedron& p) {
  std::vector<int> faces;
  for (int i = 0; i < p.num_rows(); ++i) {
    try {
      (void)face_interior_point(p, i);
      faces.push_back(i);
    } catch (const EmptyRegion&) {
    }
  }
  return faces;
}

}  // namespace

Vec face_interior_point(const Polyhedron& p, int face) {
  if (face < 0 || face >= p.num_rows()) throw DimensionError("face index out of range");
  const Vec n = unit_normal(p, face);
  LpBuilder lp;
  std::vector<int> xs;
  for (int j = 0; j < p.dim(); ++j) xs.push_back(lp.add_var(-LpBuilder::kInf, LpBuilder::kInf, 0.0));
  const int r = lp.add_var(0.0, 1.0, -1.0);
  {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < p.dim(); ++j) terms.emplace_back(xs[static_cast<std::size_t>(j)], p.G(face, j));
    lp.add_eq(std::move(terms), p.b[static_cast<std::size_t>(face)]);
  }
  for (int i = 0; i < p.num_rows(); ++i) {
    if (i == face) continue;
    // inscribed radius measured inside the face's affine slice
    Vec gi = project_out(p.G.row(i), n);
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < p.dim(); ++j) terms.emplace_back(xs[static_cast<std::size_t>(j)], p.G(i, j));
    terms.emplace_back(r, norm2(gi));
    lp.add_le(std::move(terms), p.b[static_cast<std::size_t>(i)]);
  }
  const auto sol = lp.solve();
  if (sol.status != LpStatus::Optimal) throw EmptyRegion("face is empty");
  return Vec(sol.x.begin(), sol.x.end() - 1);
}

std::vector<Vec> sample(const Polyhedron& p, Region region, int count, std::uint64_t seed) {
  if (count < 1) return {};
  switch (region.kind) {
    case Region::Kind::Interior:
      return hit_and_run_polyhedron(p, -1, count, seed);
    case Region::Kind::Face:
      return hit_and_run_polyhedron(p, region.face_index, count, seed);
    case Region::Kind::Boundary: {
      const auto faces = nonempty_faces(p);
      if (faces.empty()) throw EmptyRegion("no nonempty face");
      const int per = (count + static_cast<int>(faces.size()) - 1) / static_cast<int>(faces.size());
      std::vector<std::vector<Vec>> chains;
      chains.reserve(faces.size());
      for (int f : faces) chains.push_back(hit_and_run_polyhedron(p, f, per, seed));
      std::vector<Vec> out;
      out.reserve(static_cast<std::size_t>(count));
      for (int k = 0; k < count; ++k)
        out.push_back(chains[static_cast<std::size_t>(k) % faces.size()]
                            [static_cast<std::size_t>(k) / faces.size()]);
      return out;
    }
  }
  return {};
}

std::vector<Vec> sample(const Ellipsoid& e, Region region, int count, std::uint64_t seed) {
  if (count < 1) return {};
  if (region.kind == Region::Kind::Face) throw DimensionError("ellipsoids have no faces");
  Rng rng(Rng::mix(seed, 0xe11));
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  const int n = e.dim();
  for (int k = 0; k < count; ++k) {
    Vec u = rng.unit_vector(n);
    if (region.kind == Region::Kind::Interior) {
      const double radius = std::pow(rng.uniform(), 1.0 / n);
      for (auto& v : u) v *= radius;
    }
    out.push_back(solve_lower_transposed(e.chol, u));  // x'Qx = |u|^2
  }
  return out;
}

namespace {

// first t in (0, cap] with g(x0 + t d) > 0 (NaN counts as outside the domain)
std::optional<double> find_outside_t(const SublevelSet& s, const Vec& x0, const Vec& d, double cap) {
  Vec x(x0.size());
  for (double t = 1e-3; t <= cap; t *= 2.0) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = x0[j] + t * d[j];
    const double g = s.g.eval(x);
    if (std::isnan(g) || g > 0.0) return t;
  }
  return std::nullopt;
}

// bisect [t_in, t_out] down to |g| <= kBoundaryEq; empty when the crossing
// cannot be pinned (e.g. the domain ends before the zero level)
std::optional<Vec> bisect_boundary(const SublevelSet& s, const Vec& x0, const Vec& d, double t_in,
                                   double t_out) {
  Vec x(x0.size());
  auto eval_at = [&](double t) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = x0[j] + t * d[j];
    return s.g.eval(x);
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (t_in + t_out);
    const double g = eval_at(mid);
    if (!std::isnan(g) && std::abs(g) <= tols::kBoundaryEq) {
      Vec out(x0.size());
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = x0[j] + mid * d[j];
      return out;
    }
    if (std::isnan(g) || g > 0.0)
      t_out = mid;
    else
      t_in = mid;
    if (t_out - t_in < 1e-17 * (1.0 + std::abs(t_out))) break;
  }
  return std::nullopt;
}

Vec sublevel_interior_start(const SublevelSet& s) {
  Vec x0 = s.interior_hint ? *s.interior_hint : Vec(static_cast<std::size_t>(s.dim), 0.0);
  const double g0 = s.g.eval(x0);
  if (std::isnan(g0) || g0 >= 0.0)
    throw EmptyRegion("no strictly feasible interior point (supply a hint)");
  return x0;
}

}  // namespace

std::vector<Vec> sample(const SublevelSet& s, Region region, int count, std::uint64_t seed) {
  if (count < 1) return {};
  if (region.kind == Region::Kind::Face) throw DimensionError("sublevel sets have no faces");
  Vec x0 = sublevel_interior_start(s);
  Rng rng(Rng::mix(seed, region.kind == Region::Kind::Boundary ? 0xb0 : 0x10));
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));

  if (region.kind == Region::Kind::Boundary) {
    int failures = 0;
    const int max_failures = 64 + 16 * count;
    while (static_cast<int>(out.size()) < count) {
      const Vec d = rng.unit_vector(s.dim);
      const auto t_out = find_outside_t(s, x0, d, kRayCap);
      if (!t_out) {
        if (++failures >= max_failures)
          throw NoBoundaryFound("set appears unbounded along all sampled rays");
        continue;
      }
      const auto b = bisect_boundary(s, x0, d, 0.0, *t_out);
      if (!b) {
        if (++failures >= max_failures) throw NoBoundaryFound("could not pin the zero level set");
        continue;
      }
      out.push_back(*b);
    }
    return out;
  }

  // interior: hit-and-run along chords found by the same ray search
  Vec x = x0;
  int steps = 0;
  const int burnin = 8;
  while (static_cast<int>(out.size()) < count) {
    const Vec d = rng.unit_vector(s.dim);
    const auto tp = find_outside_t(s, x, d, kRayCap);
    Vec dneg(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) dneg[j] = -d[j];
    const auto tn = find_outside_t(s, x, dneg, kRayCap);
    const double hi = (tp ? *tp : kRayCap) * 0.49;
    const double lo = -(tn ? *tn : kRayCap) * 0.49;
    const double t = lo + (hi - lo) * rng.uniform();
    Vec cand(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) cand[j] = x[j] + t * d[j];
    const double g = s.g.eval(cand);
    if (std::isnan(g) || g >= 0.0) continue;  // conservative: stay strictly inside
    x = cand;
    if (++steps > burnin) out.push_back(x);
  }
  return out;
}

std::vector<Vec> sample(const CandidateSet& set, Region region, int count, std::uint64_t seed) {
  return std::visit([&](const auto& s) { return sample(s, region, count, seed); }, set);
}

}  // namespace invacheck
