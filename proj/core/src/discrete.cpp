// SPDX-License-Identifier: Apache-2.0
#include "invacheck/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invacheck/compose.hpp"
#include "invacheck/lp.hpp"
#include "invacheck/rng.hpp"
#include "invacheck/tolerances.hpp"

namespace invacheck {

namespace {

OptConfig with_default_box(OptConfig cfg, int dim) {
  if (cfg.box.dim() != dim) cfg.box = Box::symmetric(dim);
  return cfg;
}

std::string format_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// H_i'G as a coefficient vector over x
Vec row_times_matrix(const Mat& h, int i, const Mat& g) {
  Vec out(static_cast<std::size_t>(g.cols), 0.0);
  for (int k = 0; k < g.rows; ++k) {
    const double hik = h(i, k);
    if (hik == 0.0) continue;
    for (int j = 0; j < g.cols; ++j) out[static_cast<std::size_t>(j)] += hik * g(k, j);
  }
  return out;
}

Expr polyhedral_row_residual(const Polyhedron& p, const VectorField& f, const Mat& h, int i) {
  const Vec hg = row_times_matrix(h, i, p.G);
  double hb = 0.0;
  for (int k = 0; k < p.num_rows(); ++k) hb += h(i, k) * p.b[static_cast<std::size_t>(k)];
  return linear_form(hg) - field_dot(p.G.row(i), f) +
         Expr::constant(p.b[static_cast<std::size_t>(i)] - hb);
}

OptResult run_inner_min(const Expr& residual, Mode mode, const CandidateSet& set,
                        const OptConfig& cfg, int dim) {
  const ScalarFunction fn = make_function(residual, dim);
  if (mode == Mode::Global) return minimize_multistart(fn, cfg);
  return minimize_over_set(fn, set, cfg);
}

void note_domain_share(CheckVerdict& v, const OptResult& r) {
  if (r.starts_used > 0 && r.invalid_starts * 2 > r.starts_used) {
    v.domain_flag = true;
    const int pct = static_cast<int>(100.0 * r.invalid_starts / r.starts_used);
    v.notes.push_back("DomainFlag: map undefined on about " + std::to_string(pct) +
                      "% of sampled points");
  }
}

// Residual-negative witness: re-validate by direct evaluation and, when the
// point maps out of the set in one step, attach that as the stronger note.
void attach_witness(CheckVerdict& v, const Vec& x, const Expr& residual, const VectorField& f,
                    const CandidateSet& set) {
  v.counterexample = x;
  const double r = residual.eval(x);
  v.notes.push_back("witness residual " + format_num(r));
  const Containment cx = contains_ex(set, x);
  if (cx.inside) {
    const Vec y = f.eval(x);
    bool finite = true;
    for (double c : y)
      if (!std::isfinite(c)) finite = false;
    if (finite) {
      const Containment cy = contains_ex(set, y);
      if (!cy.domain_flag && !cy.inside)
        v.notes.push_back("witness maps out of the set in one step (margin " +
                          format_num(cy.margin) + ")");
    }
  }
}

bool hypothesis_ok(const ShapeReport& rep, bool need_convex) {
  if (need_convex)
    return rep.verdict == ShapeVerdict::Convex || rep.verdict == ShapeVerdict::Affine;
  return rep.verdict == ShapeVerdict::Concave || rep.verdict == ShapeVerdict::Affine;
}

// Applies the Global-mode hypothesis policy: a failed probe caps VERIFIED at
// INCONCLUSIVE (the restricted-mode theorems stay applicable); sampled-only
// probes are noted.
void cap_by_hypotheses(CheckVerdict& v, bool need_convex) {
  bool any_failed = false;
  bool any_sampled = false;
  for (const auto& h : v.hypotheses) {
    if (!hypothesis_ok(h, need_convex)) any_failed = true;
    if (h.certainty == ShapeCertainty::Sampled) any_sampled = true;
  }
  if (any_failed && v.status == CheckStatus::Verified) {
    v.status = CheckStatus::Inconclusive;
    v.notes.push_back(
        "curvature hypothesis not satisfied; residual evidence reported, "
        "use restricted mode for an assumption-free verdict");
  } else if (any_sampled) {
    v.notes.push_back("curvature hypotheses sampled, not certified");
  }
}

}  // namespace

CheckVerdict verify_polyhedral_h(const Polyhedron& p, const VectorField& f, const Mat& h, Mode mode,
                                 const OptConfig& cfg_in) {
  const int m = p.num_rows();
  const int n = p.dim();
  if (f.dim != n) throw DimensionError("field dimension does not match the polyhedron");
  if (h.rows != m || h.cols != m) throw DimensionError("H must be m x m");
  for (double v : h.data)
    if (v < -1e-12) throw NegativeEntries("H has a negative entry");
  const OptConfig cfg = with_default_box(cfg_in, n);
  const CandidateSet set{p};

  CheckVerdict verdict;
  if (mode == Mode::Global) {
    for (int i = 0; i < m; ++i) {
      const Expr hyp = Expr::constant(p.b[static_cast<std::size_t>(i)]) - field_dot(p.G.row(i), f);
      ShapeReport rep = probe(hyp, cfg.box, 512, cfg.seed);
      rep.target = "b_" + std::to_string(i + 1) + " - G_" + std::to_string(i + 1) + "'f convexity";
      verdict.hypotheses.push_back(std::move(rep));
    }
  }

  double worst = std::numeric_limits<double>::infinity();
  int worst_row = -1;
  std::vector<Expr> residuals;
  bool degenerate = false;
  for (int i = 0; i < m; ++i) {
    residuals.push_back(polyhedral_row_residual(p, f, h, i));
    const OptResult r = run_inner_min(residuals.back(), mode, set, cfg, n);
    note_domain_share(verdict, r);
    if (r.status == OptStatus::AllSamplesInvalid) {
      degenerate = true;
      verdict.residual_minima.push_back(std::numeric_limits<double>::quiet_NaN());
      verdict.residual_argmins.emplace_back();
      continue;
    }
    verdict.residual_minima.push_back(r.best_value);
    verdict.residual_argmins.push_back(r.best_point);
    if (r.best_value < worst) {
      worst = r.best_value;
      worst_row = i;
    }
  }

  if (worst_row >= 0 && worst < -tols::kResidual) {
    verdict.status = CheckStatus::Falsified;
    verdict.notes.push_back("row " + std::to_string(worst_row + 1) + " residual minimum " +
                            format_num(worst));
    attach_witness(verdict, verdict.residual_argmins[static_cast<std::size_t>(worst_row)],
                   residuals[static_cast<std::size_t>(worst_row)], f, set);
    return verdict;
  }
  if (degenerate) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("optimizer could not evaluate some rows");
    return verdict;
  }
  verdict.status = CheckStatus::Verified;
  verdict.certificate = Certificate{Certificate::Kind::HMatrix, mode, h, 0.0};
  if (mode == Mode::Global) cap_by_hypotheses(verdict, /*need_convex=*/true);
  return verdict;
}

namespace {

struct RowSearchOutcome {
  bool found = false;
  bool hopeless = false;
  bool round_cap = false;
  Vec h_row;
  double residual_min = 0.0;
  Vec argmin;
};

RowSearchOutcome search_row(const Polyhedron& p, const VectorField& f, int row, Mode mode,
                            const OptConfig& cfg) {
  const int m = p.num_rows();
  const int n = p.dim();
  const CandidateSet set{p};
  const Vec gi = p.G.row(row);
  const double bi = p.b[static_cast<std::size_t>(row)];

  auto residual_for = [&](const Vec& h_row) {
    Mat h(m, m);
    for (int k = 0; k < m; ++k) h(row, k) = h_row[static_cast<std::size_t>(k)];
    return polyhedral_row_residual(p, f, h, row);
  };

  RowSearchOutcome out;

  // restricted-mode necessity holds with H = 0, so try that first
  if (mode == Mode::Restricted) {
    const Vec zero(static_cast<std::size_t>(m), 0.0);
    const Expr r0 = residual_for(zero);
    const OptResult res = run_inner_min(r0, mode, set, cfg, n);
    if (res.status != OptStatus::AllSamplesInvalid && res.best_value >= -tols::kResidual) {
      out.found = true;
      out.h_row = zero;
      out.residual_min = res.best_value;
      out.argmin = res.best_point;
      return out;
    }
  }

  // cutting-plane loop over a growing sample set
  std::vector<Vec> points;
  if (mode == Mode::Global) {
    points.push_back(Vec(static_cast<std::size_t>(n), 0.0));
    for (int k = 0; k < 16; ++k)
      points.push_back(halton_in_box(1 + static_cast<std::uint64_t>(k), cfg.box));
  } else {
    points = sample(p, Region::interior(), 16, cfg.seed);
  }

  const double h_cap = 1e3;
  for (int round = 0; round < 50; ++round) {
    LpBuilder lp;
    std::vector<int> hvars;
    for (int k = 0; k < m; ++k) hvars.push_back(lp.add_var(0.0, h_cap, 0.0));
    const int t = lp.add_var(-LpBuilder::kInf, LpBuilder::kInf, -1.0);  // maximize worst margin
    int usable = 0;
    for (const Vec& x : points) {
      const Vec fx = f.eval(x);
      bool finite = true;
      for (double c : fx)
        if (!std::isfinite(c)) finite = false;
      if (!finite) continue;
      ++usable;
      // h'(Gx - b) - (g_i'f(x) - b_i) >= t
      std::vector<std::pair<int, double>> terms;
      for (int k = 0; k < m; ++k) {
        double gkx = 0.0;
        for (int j = 0; j < n; ++j) gkx += p.G(k, j) * x[static_cast<std::size_t>(j)];
        terms.emplace_back(hvars[static_cast<std::size_t>(k)], gkx - p.b[static_cast<std::size_t>(k)]);
      }
      terms.emplace_back(t, -1.0);
      lp.add_ge(std::move(terms), dot(gi, fx) - bi);
    }
    if (usable == 0) {
      out.hopeless = true;
      return out;
    }
    const auto sol = lp.solve();
    if (sol.status != LpStatus::Optimal) {
      out.hopeless = true;
      return out;
    }
    const double margin = sol.x.back();
    if (margin < -tols::kResidual) {
      // even the best row multiplier violates some sampled point
      out.hopeless = true;
      return out;
    }
    Vec h_row(sol.x.begin(), sol.x.end() - 1);
    for (auto& v : h_row) v = std::max(0.0, v);
    const Expr r = residual_for(h_row);
    const OptResult res = run_inner_min(r, mode, set, cfg, n);
    if (res.status == OptStatus::AllSamplesInvalid) {
      out.hopeless = true;
      return out;
    }
    if (res.best_value >= -tols::kResidual) {
      out.found = true;
      out.h_row = std::move(h_row);
      out.residual_min = res.best_value;
      out.argmin = res.best_point;
      return out;
    }
    points.push_back(res.best_point);
  }
  out.round_cap = true;
  return out;
}

}  // namespace

CheckVerdict search_polyhedral_h(const Polyhedron& p, const VectorField& f, Mode mode,
                                 const OptConfig& cfg_in) {
  const int m = p.num_rows();
  const int n = p.dim();
  if (f.dim != n) throw DimensionError("field dimension does not match the polyhedron");
  const OptConfig cfg = with_default_box(cfg_in, n);

  Mat h(m, m);
  bool all_found = true;
  bool any_cap = false;
  bool any_hopeless = false;
  CheckVerdict verdict;
  for (int i = 0; i < m; ++i) {
    const RowSearchOutcome row = search_row(p, f, i, mode, cfg);
    if (row.found) {
      for (int k = 0; k < m; ++k) h(i, k) = row.h_row[static_cast<std::size_t>(k)];
      verdict.residual_minima.push_back(row.residual_min);
      verdict.residual_argmins.push_back(row.argmin);
    } else {
      all_found = false;
      any_cap = any_cap || row.round_cap;
      any_hopeless = any_hopeless || row.hopeless;
      verdict.residual_minima.push_back(std::numeric_limits<double>::quiet_NaN());
      verdict.residual_argmins.emplace_back();
      verdict.notes.push_back("row " + std::to_string(i + 1) +
                              (row.round_cap ? ": cutting-plane round cap exceeded"
                                             : ": no feasible row multiplier on sampled points"));
    }
  }

  if (all_found) {
    CheckVerdict rechecked = verify_polyhedral_h(p, f, h, mode, cfg);
    rechecked.notes.insert(rechecked.notes.begin(), "certificate found by cutting-plane search");
    return rechecked;
  }

  // no certificate: look for a direct one-step escape before giving up
  try {
    const auto pts = sample(p, Region::interior(), 64, cfg.seed + 7);
    for (const Vec& x : pts) {
      const Vec y = f.eval(x);
      bool finite = true;
      for (double c : y)
        if (!std::isfinite(c)) finite = false;
      if (!finite) continue;
      const Containment cy = contains_ex(CandidateSet{p}, y);
      if (!cy.domain_flag && !cy.inside) {
        verdict.status = CheckStatus::Falsified;
        verdict.counterexample = x;
        verdict.notes.push_back("one-step escape with margin " + format_num(cy.margin));
        return verdict;
      }
    }
  } catch (const Error&) {
  }

  verdict.status = CheckStatus::Inconclusive;
  if (any_cap) verdict.notes.push_back("certificate search hit the round cap");
  if (any_hopeless)
    verdict.notes.push_back("no row multiplier fits the sampled points, but no escape was found");
  return verdict;
}

CheckVerdict linear_polyhedral_check(const Polyhedron& p, const Mat& a) {
  const int m = p.num_rows();
  const int n = p.dim();
  if (a.rows != n || a.cols != n) throw DimensionError("A must be n x n");

  const Mat at = transpose(a);
  const Mat gt = transpose(p.G);
  CheckVerdict verdict;
  verdict.exactness = Exactness::Exact;
  Mat h(m, m);
  int bad_row = -1;
  bool empty_polyhedron = false;
  for (int i = 0; i < m; ++i) {
    // min b'h s.t. G'h = A'g_i, h >= 0
    const Vec rhs = matvec(at, p.G.row(i));
    LpProblem lp;
    lp.c = p.b;
    lp.a_eq = gt;
    lp.b_eq = rhs;
    const LpResult res = lp_solve(lp);
    if (res.status == LpStatus::Unbounded) {
      empty_polyhedron = true;
      break;
    }
    if (res.status == LpStatus::Infeasible ||
        res.value > p.b[static_cast<std::size_t>(i)] + tols::kPsd) {
      bad_row = i;
      verdict.residual_minima.push_back(res.status == LpStatus::Optimal
                                            ? p.b[static_cast<std::size_t>(i)] - res.value
                                            : -std::numeric_limits<double>::infinity());
      verdict.notes.push_back(
          "row " + std::to_string(i + 1) +
          (res.status == LpStatus::Optimal ? ": LP value " + format_num(res.value) + " exceeds b_i"
                                           : ": LP infeasible (support function grows without bound)"));
      break;
    }
    for (int k = 0; k < m; ++k) h(i, k) = res.x[static_cast<std::size_t>(k)];
    verdict.residual_minima.push_back(p.b[static_cast<std::size_t>(i)] - res.value);
  }

  if (empty_polyhedron) {
    // dual unbounded means the support LP over P is infeasible, i.e. P = {}
    try {
      (void)interior_point(p);
    } catch (const EmptyRegion&) {
      verdict.status = CheckStatus::Verified;
      verdict.notes.push_back("polyhedron is empty; invariance holds vacuously");
      return verdict;
    }
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("row LP unbounded on a nonempty polyhedron");
    verdict.exactness = Exactness::Numerical;
    return verdict;
  }

  if (bad_row < 0) {
    verdict.status = CheckStatus::Verified;
    verdict.certificate = Certificate{Certificate::Kind::HMatrix, Mode::Global, h, 0.0};
    return verdict;
  }

  verdict.status = CheckStatus::Falsified;
  // attach a concrete escaping point: maximize g_i'Ax over P (kept bounded
  // by a large auxiliary box)
  {
    const Vec c = matvec(at, p.G.row(bad_row));
    LpBuilder lp;
    std::vector<int> xs;
    for (int j = 0; j < n; ++j)
      xs.push_back(lp.add_var(-1e3, 1e3, -c[static_cast<std::size_t>(j)]));
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < n; ++j) terms.emplace_back(xs[static_cast<std::size_t>(j)], p.G(i, j));
      lp.add_le(std::move(terms), p.b[static_cast<std::size_t>(i)]);
    }
    const auto sol = lp.solve();
    if (sol.status == LpStatus::Optimal) {
      const Vec y = matvec(a, sol.x);
      const Containment cy = contains_ex(CandidateSet{p}, y);
      if (!cy.inside) {
        verdict.counterexample = sol.x;
        verdict.notes.push_back("one-step escape with margin " + format_num(cy.margin));
      } else {
        verdict.notes.push_back("no escape point inside the witness box");
      }
    }
  }
  return verdict;
}

CheckVerdict verify_ellipsoid_beta(const Ellipsoid& e, const VectorField& f, double beta, Mode mode,
                                   const OptConfig& cfg_in) {
  if (beta < 0.0) throw NegativeBeta("beta must be nonnegative");
  const int n = e.dim();
  if (f.dim != n) throw DimensionError("field dimension does not match the ellipsoid");
  const OptConfig cfg = with_default_box(cfg_in, n);
  const CandidateSet set{e};

  CheckVerdict verdict;
  const Expr fqf = field_quadratic(e.Q, f);
  if (mode == Mode::Global) {
    ShapeReport rep = probe(fqf, cfg.box, 512, cfg.seed);
    rep.target = "f'Qf concavity";
    verdict.hypotheses.push_back(std::move(rep));

    const Vec origin(static_cast<std::size_t>(n), 0.0);
    const Vec f0 = f.eval(origin);
    bool finite = true;
    for (double c : f0)
      if (!std::isfinite(c)) finite = false;
    if (finite) {
      const double bound = 1.0 - dot(f0, matvec(e.Q, f0));
      if (beta > bound + tols::kPsd) {
        verdict.status = CheckStatus::Falsified;
        verdict.counterexample = origin;
        verdict.residual_minima.push_back(bound - beta);
        verdict.notes.push_back("beta exceeds its admissible bound " + format_num(bound) +
                                "; the residual is negative at the origin");
        return verdict;
      }
    } else {
      verdict.notes.push_back("map undefined at the origin; beta bound not checked");
      verdict.domain_flag = true;
    }
  }

  const Expr residual =
      Expr::constant(beta) * quadratic_form(e.Q) - fqf + Expr::constant(1.0 - beta);
  const OptResult r = run_inner_min(residual, mode, set, cfg, n);
  note_domain_share(verdict, r);
  if (r.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("residual not evaluable anywhere in the domain");
    return verdict;
  }
  verdict.residual_minima.push_back(r.best_value);
  verdict.residual_argmins.push_back(r.best_point);
  if (r.best_value < -tols::kResidual) {
    verdict.status = CheckStatus::Falsified;
    attach_witness(verdict, r.best_point, residual, f, set);
    return verdict;
  }
  verdict.status = CheckStatus::Verified;
  verdict.certificate = Certificate{Certificate::Kind::Beta, mode, Mat{}, beta};
  if (mode == Mode::Global) cap_by_hypotheses(verdict, /*need_convex=*/false);
  return verdict;
}

CheckVerdict search_ellipsoid_beta(const Ellipsoid& e, const VectorField& f, Mode mode,
                                   const OptConfig& cfg_in) {
  const int n = e.dim();
  if (f.dim != n) throw DimensionError("field dimension does not match the ellipsoid");
  const OptConfig cfg = with_default_box(cfg_in, n);
  const CandidateSet set{e};

  CheckVerdict verdict;
  double upper = 1e3;
  if (mode == Mode::Global) {
    const Vec origin(static_cast<std::size_t>(n), 0.0);
    const Vec f0 = f.eval(origin);
    bool finite = true;
    for (double c : f0)
      if (!std::isfinite(c)) finite = false;
    if (finite) {
      upper = std::clamp(1.0 - dot(f0, matvec(e.Q, f0)), 0.0, 1.0);
    } else {
      upper = 1.0;
      verdict.notes.push_back("map undefined at the origin; using beta upper bound 1");
      verdict.domain_flag = true;
    }
  }

  const Expr fqf = field_quadratic(e.Q, f);
  const Expr xqx = quadratic_form(e.Q);
  OptResult last_inner;
  const auto inner = [&](double beta) {
    const Expr residual = Expr::constant(beta) * xqx - fqf + Expr::constant(1.0 - beta);
    return run_inner_min(residual, mode, set, cfg, n);
  };
  const MaximinResult mm = maximin_scalar(0.0, upper, inner, 33, 3);
  note_domain_share(verdict, mm.inner);

  if (mode == Mode::Global) {
    ShapeReport rep = probe(fqf, cfg.box, 512, cfg.seed);
    rep.target = "f'Qf concavity";
    verdict.hypotheses.push_back(std::move(rep));
  }

  if (mm.inner.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("inner minimization not evaluable");
    return verdict;
  }
  verdict.residual_minima.push_back(mm.inner.best_value);
  verdict.residual_argmins.push_back(mm.inner.best_point);
  verdict.notes.push_back("best beta " + format_num(mm.multiplier));
  if (mm.inner.best_value >= -tols::kResidual) {
    verdict.status = CheckStatus::Verified;
    verdict.certificate = Certificate{Certificate::Kind::Beta, mode, Mat{}, mm.multiplier};
    if (mode == Mode::Global) cap_by_hypotheses(verdict, /*need_convex=*/false);
    return verdict;
  }
  verdict.status = CheckStatus::Falsified;
  const Expr residual =
      Expr::constant(mm.multiplier) * xqx - fqf + Expr::constant(1.0 - mm.multiplier);
  attach_witness(verdict, mm.inner.best_point, residual, f, set);
  return verdict;
}

CheckVerdict linear_ellipsoid_check(const Ellipsoid& e, const Mat& a) {
  const int n = e.dim();
  if (a.rows != n || a.cols != n) throw DimensionError("A must be n x n");

  const Mat m = mat_sub(matmul(transpose(a), matmul(e.Q, a)), e.Q);
  const EigenResult eig = sym_eigen(m);
  CheckVerdict verdict;
  verdict.exactness = Exactness::Exact;
  verdict.residual_minima.push_back(-eig.values.front());  // max eigenvalue, negated
  if (eig.values.front() <= tols::kPsd) {
    verdict.status = CheckStatus::Verified;
    verdict.certificate = Certificate{Certificate::Kind::Beta, Mode::Global, Mat{}, 1.0};
    verdict.notes.push_back("A'QA - Q is negative semidefinite (max eigenvalue " +
                            format_num(eig.values.front()) + ")");
    return verdict;
  }
  verdict.status = CheckStatus::Falsified;
  // top eigenvector scaled to the boundary leaves the set in one step
  Vec v = eig.vectors.col(0);
  const double vqv = dot(v, matvec(e.Q, v));
  const double scale = 1.0 / std::sqrt(vqv);
  for (auto& c : v) c *= scale;
  verdict.counterexample = v;
  verdict.notes.push_back("top eigenvalue " + format_num(eig.values.front()) +
                          "; boundary point leaves the set in one step");
  return verdict;
}

namespace {

bool constant_hessian(const Expr& e, int dim) {
  const Derivatives d = derivatives(e, dim);
  for (const auto& row : d.hessian)
    for (const auto& h : row)
      if (!h.is_constant()) return false;
  return true;
}

void slater_probe(CheckVerdict& verdict, const SublevelSet& s, const OptConfig& cfg) {
  Vec probe_point = s.interior_hint ? *s.interior_hint : Vec(static_cast<std::size_t>(s.dim), 0.0);
  double g = s.g.eval(probe_point);
  if (!std::isnan(g) && g < -tols::kPsd) return;
  for (int k = 0; k < 64; ++k) {
    const Vec x = halton_in_box(1 + static_cast<std::uint64_t>(k), cfg.box);
    g = s.g.eval(x);
    if (!std::isnan(g) && g < -tols::kPsd) return;
  }
  verdict.notes.push_back("Slater condition unverified: no strictly feasible point found");
}

}  // namespace

CheckVerdict verify_convex_alpha(const SublevelSet& s, const VectorField& f, double alpha,
                                 Mode mode, const OptConfig& cfg_in) {
  if (alpha < 0.0) throw NegativeAlpha("alpha must be nonnegative");
  const int n = s.dim;
  if (f.dim != n) throw DimensionError("field dimension does not match the set");
  const OptConfig cfg = with_default_box(cfg_in, n);
  const CandidateSet set{s};

  CheckVerdict verdict;
  const Expr g_of_f = compose(s.g, f);
  if (mode == Mode::Global) {
    slater_probe(verdict, s, cfg);
    if (constant_hessian(s.g, n) && constant_hessian(g_of_f, n)) {
      verdict.notes.push_back("quadratic pair: concavity probe waived (S-procedure route)");
    } else {
      ShapeReport rep = probe(g_of_f, cfg.box, 512, cfg.seed);
      rep.target = "g(f(x)) concavity";
      verdict.hypotheses.push_back(std::move(rep));
      verdict.notes.push_back("multiplier route with probed hypotheses (Farkas route)");
    }
  }

  const Expr residual = Expr::constant(alpha) * s.g - g_of_f;
  const OptResult r = run_inner_min(residual, mode, set, cfg, n);
  note_domain_share(verdict, r);
  if (r.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("residual not evaluable anywhere in the domain");
    return verdict;
  }
  verdict.residual_minima.push_back(r.best_value);
  verdict.residual_argmins.push_back(r.best_point);
  if (r.best_value < -tols::kResidual) {
    verdict.status = CheckStatus::Falsified;
    attach_witness(verdict, r.best_point, residual, f, set);
    return verdict;
  }
  verdict.status = CheckStatus::Verified;
  verdict.certificate = Certificate{Certificate::Kind::Alpha, mode, Mat{}, alpha};
  if (mode == Mode::Global) cap_by_hypotheses(verdict, /*need_convex=*/false);
  return verdict;
}

CheckVerdict search_convex_alpha(const SublevelSet& s, const VectorField& f, Mode mode,
                                 const OptConfig& cfg_in) {
  const int n = s.dim;
  if (f.dim != n) throw DimensionError("field dimension does not match the set");
  const OptConfig cfg = with_default_box(cfg_in, n);
  const CandidateSet set{s};

  CheckVerdict verdict;
  const Expr g_of_f = compose(s.g, f);
  const double upper = 1e3;
  const auto inner = [&](double alpha) {
    const Expr residual = Expr::constant(alpha) * s.g - g_of_f;
    return run_inner_min(residual, mode, set, cfg, n);
  };
  const MaximinResult mm = maximin_scalar(0.0, upper, inner, 33, 3);
  note_domain_share(verdict, mm.inner);
  if (mm.inner.status == OptStatus::AllSamplesInvalid) {
    verdict.status = CheckStatus::Inconclusive;
    verdict.notes.push_back("inner minimization not evaluable");
    return verdict;
  }
  verdict.residual_minima.push_back(mm.inner.best_value);
  verdict.residual_argmins.push_back(mm.inner.best_point);
  verdict.notes.push_back("best alpha " + format_num(mm.multiplier));
  if (mm.inner.best_value >= -tols::kResidual) {
    verdict.status = CheckStatus::Verified;
    verdict.certificate = Certificate{Certificate::Kind::Alpha, mode, Mat{}, mm.multiplier};
    return verdict;
  }
  verdict.status = CheckStatus::Falsified;
  const Expr residual = Expr::constant(mm.multiplier) * s.g - g_of_f;
  attach_witness(verdict, mm.inner.best_point, residual, f, set);
  return verdict;
}

OptResult wolfe_dual_value(const SublevelSet& s, const VectorField& f, double alpha,
                           const OptConfig& cfg_in) {
  if (alpha < 0.0) throw NegativeAlpha("alpha must be nonnegative");
  const int n = s.dim;
  const OptConfig cfg = with_default_box(cfg_in, n);

  const Expr g_of_f = compose(s.g, f);
  const Expr objective = Expr::constant(alpha) * s.g - g_of_f;

  std::vector<std::string> notes;
  {
    ShapeReport pg = probe(s.g, cfg.box, 256, cfg.seed);
    ShapeReport pf = probe(g_of_f, cfg.box, 256, cfg.seed);
    const bool ok = hypothesis_ok(pg, true) && hypothesis_ok(pf, false);
    if (!ok)
      notes.push_back("HypothesisUnverified: duality gap is not guaranteed to close");
    else if (pg.certainty == ShapeCertainty::Sampled || pf.certainty == ShapeCertainty::Sampled)
      notes.push_back("HypothesisUnverified: curvature only sampled, not certified");
  }

  // stationarity: alpha grad g - grad g(f(x)) = 0, squared into a penalty
  Expr stationarity_sq = Expr::constant(0.0);
  for (int i = 1; i <= n; ++i) {
    const Expr ci = Expr::constant(alpha) * s.g.derivative(i) - g_of_f.derivative(i);
    stationarity_sq = stationarity_sq + Expr::integer_pow(ci, 2);
  }

  OptConfig stage = cfg;
  stage.max_iters = std::max(cfg.max_iters, 3000);
  OptResult best;
  for (const double rho : {1e3, 1e4, 1e5}) {
    const Expr penalized = objective - Expr::constant(rho) * stationarity_sq;
    const ScalarFunction fn = make_function(penalized, n);
    if (best.best_point.empty()) {
      best = maximize_multistart(fn, stage);
      continue;
    }
    // warm start: refine the incumbent under the stiffer penalty
    const OptResult refined = maximize_from(fn, best.best_point, stage);
    if (refined.status != OptStatus::AllSamplesInvalid) best = refined;
  }

  if (best.status == OptStatus::AllSamplesInvalid) {
    best.notes.insert(best.notes.end(), notes.begin(), notes.end());
    return best;
  }
  // report the plain objective at the near-stationary point
  const double value = objective.eval(best.best_point);
  const double viol = std::sqrt(std::max(0.0, stationarity_sq.eval(best.best_point)));
  best.best_value = value;
  best.notes.insert(best.notes.end(), notes.begin(), notes.end());
  best.notes.push_back("stationarity violation " + format_num(viol));
  return best;
}

CheckVerdict epsilon_implication(const Expr& phi, const Expr& psi, const VectorField& f,
                                 const OptConfig& cfg_in) {
  const int n = f.dim;
  const OptConfig cfg = with_default_box(cfg_in, n);
  const Expr psi_of_f = compose(psi, f);
  const ScalarFunction psi_fn = make_function(psi_of_f, n);

  CheckVerdict verdict;

  // dense feasible scan
  double eps_star = -std::numeric_limits<double>::infinity();
  Vec best_x;
  Vec anchor;
  double anchor_phi = std::numeric_limits<double>::infinity();
  int feasible = 0;
  const int dense = std::max(cfg.starts * 16, 2048);
  for (int k = 0; k < dense; ++k) {
    const Vec x = halton_in_box(1 + static_cast<std::uint64_t>(k), cfg.box);
    const double ph = phi.eval(x);
    if (std::isnan(ph) || ph > 0.0) continue;
    ++feasible;
    if (ph < anchor_phi) {
      anchor_phi = ph;
      anchor = x;
    }
    const double v = psi_of_f.eval(x);
    if (std::isnan(v)) continue;
    if (v > eps_star) {
      eps_star = v;
      best_x = x;
    }
  }
  if (feasible == 0) {
    verdict.status = CheckStatus::Verified;
    verdict.notes.push_back("feasible region {phi <= 0} appears empty in the box; vacuous");
    return verdict;
  }

  // penalized ascent polish from the best feasible points
  const double rho = 1e6;
  ScalarFunction pen;
  pen.value = [&](std::span<const double> p) {
    const double v = psi_of_f.eval(p);
    const double ph = phi.eval(p);
    if (std::isnan(v) || std::isnan(ph)) return std::numeric_limits<double>::quiet_NaN();
    const double viol = std::max(0.0, ph);
    return -(v - rho * viol * viol);
  };
  pen.gradient = [&](std::span<const double> p) {
    const double ph = phi.eval(p);
    if (!std::isnan(ph) && ph < 0.0) {
      Vec g = psi_fn.gradient(p);
      for (auto& v : g) v = -v;
      return g;
    }
    return fd_gradient(pen.value, p);
  };
  if (!best_x.empty()) {
    OptConfig local = cfg;
    local.starts = std::max(4, cfg.starts / 8);
    OptResult res = minimize_multistart(pen, local);
    if (res.status != OptStatus::AllSamplesInvalid && std::isfinite(res.best_value)) {
      const double ph = phi.eval(res.best_point);
      Vec x = res.best_point;
      if (!std::isnan(ph) && ph > tols::kBoundaryEq && !anchor.empty()) {
        // restore feasibility toward the anchor
        Vec lo = anchor;
        Vec hi = x;
        for (int it = 0; it < 200; ++it) {
          Vec mid(x.size());
          for (std::size_t j = 0; j < x.size(); ++j) mid[j] = 0.5 * (lo[j] + hi[j]);
          const double pm = phi.eval(mid);
          if (!std::isnan(pm) && pm <= 0.0 && pm > -1e-6) {
            x = std::move(mid);
            break;
          }
          if (!std::isnan(pm) && pm <= 0.0)
            lo = std::move(mid);
          else
            hi = std::move(mid);
          if (it == 199) x = lo;
        }
      }
      const double phx = phi.eval(x);
      const double vx = psi_of_f.eval(x);
      if (!std::isnan(phx) && phx <= tols::kBoundaryEq && !std::isnan(vx) && vx > eps_star) {
        eps_star = vx;
        best_x = x;
      }
    }
  }

  verdict.residual_minima.push_back(-eps_star);
  verdict.residual_argmins.push_back(best_x);
  verdict.notes.push_back("eps_star = " + format_num(eps_star));
  if (eps_star <= tols::kResidual) {
    verdict.status = CheckStatus::Verified;
  } else {
    verdict.status = CheckStatus::Falsified;
    verdict.counterexample = best_x;
  }
  return verdict;
}

std::optional<Mat> linear_map_matrix(const VectorField& f) {
  const int n = f.dim;
  Mat a(n, n);
  const Vec origin(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const Expr& fi = f.components[static_cast<std::size_t>(i)];
    const double at0 = fi.eval(origin);
    if (at0 != 0.0) return std::nullopt;
    for (int j = 1; j <= n; ++j) {
      const Expr d = fi.derivative(j);
      if (!d.is_constant()) return std::nullopt;
      a(i, j - 1) = d.constant_value();
    }
  }
  return a;
}

}  // namespace invacheck
