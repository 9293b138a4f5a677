// SPDX-License-Identifier: Apache-2.0
#include "runner.hpp"

#include <chrono>
#include <fstream>

#include "report.hpp"

#include "invacheck/compose.hpp"
#include "invacheck/continuous.hpp"
#include "invacheck/convexity.hpp"
#include "invacheck/discrete.hpp"
#include "invacheck/oracle.hpp"
#include "invacheck/optimize.hpp"

namespace invacheck::cli {

namespace {

OptConfig build_config(const ProblemSpec& spec, const CliOptions& opts, std::uint64_t seed) {
  OptConfig cfg;
  cfg.seed = seed;
  const std::pair<double, double> range =
      opts.box ? *opts.box : (spec.box ? *spec.box : std::pair<double, double>{-100.0, 100.0});
  cfg.box = Box(Vec(static_cast<std::size_t>(spec.dimension), range.first),
                Vec(static_cast<std::size_t>(spec.dimension), range.second));
  if (opts.starts)
    cfg.starts = *opts.starts;
  else if (spec.opt_starts)
    cfg.starts = *spec.opt_starts;
  if (spec.opt_max_iters) cfg.max_iters = *spec.opt_max_iters;
  return cfg;
}

std::uint64_t resolve_seed(const ProblemSpec& spec, const CliOptions& opts,
                           std::optional<std::uint64_t> env_seed) {
  if (opts.seed) return *opts.seed;
  if (spec.seed) return *spec.seed;
  if (env_seed) return *env_seed;
  return 0;
}

CheckVerdict dispatch_check(const ProblemSpec& spec, const OptConfig& cfg, bool certify,
                            std::vector<std::string>& notes) {
  const std::optional<Mat> linear = linear_map_matrix(spec.dynamics);

  if (spec.system_kind == SystemKind::Continuous) {
    switch (spec.set_kind) {
      case SetKind::Polyhedron:
        return check_polyhedron_continuous(*spec.polyhedron, spec.dynamics, cfg);
      case SetKind::Ellipsoid:
        return check_ellipsoid_continuous(*spec.ellipsoid, spec.dynamics, cfg);
      case SetKind::Sublevel:
        return check_sublevel_continuous(*spec.sublevel, spec.dynamics, cfg);
    }
  }

  switch (spec.set_kind) {
    case SetKind::Polyhedron:
      if (!certify && spec.cert_h)
        return verify_polyhedral_h(*spec.polyhedron, spec.dynamics, *spec.cert_h, spec.mode, cfg);
      if (linear && spec.mode == Mode::Global) {
        notes.push_back("linear dynamics detected; exact LP fast path");
        return linear_polyhedral_check(*spec.polyhedron, *linear);
      }
      if (certify) return search_polyhedral_h(*spec.polyhedron, spec.dynamics, spec.mode, cfg);
      throw UsageError("discrete polyhedral check needs a certificate H (or linear dynamics)");
    case SetKind::Ellipsoid:
      if (!certify && spec.cert_beta)
        return verify_ellipsoid_beta(*spec.ellipsoid, spec.dynamics, *spec.cert_beta, spec.mode,
                                     cfg);
      if (linear && spec.mode == Mode::Global) {
        notes.push_back("linear dynamics detected; exact eigenvalue fast path");
        return linear_ellipsoid_check(*spec.ellipsoid, *linear);
      }
      if (certify) return search_ellipsoid_beta(*spec.ellipsoid, spec.dynamics, spec.mode, cfg);
      throw UsageError("discrete ellipsoid check needs a certificate beta (or linear dynamics)");
    case SetKind::Sublevel:
      if (!certify && spec.cert_alpha)
        return verify_convex_alpha(*spec.sublevel, spec.dynamics, *spec.cert_alpha, spec.mode,
                                   cfg);
      if (certify) return search_convex_alpha(*spec.sublevel, spec.dynamics, spec.mode, cfg);
      throw UsageError("discrete sublevel check needs a certificate alpha; try certify");
  }
  throw Error("unreachable dispatch");
}

std::vector<ShapeReport> dispatch_probe(const ProblemSpec& spec, const OptConfig& cfg) {
  std::vector<ShapeReport> probes;
  const VectorField& f = spec.dynamics;
  const int n = spec.dimension;
  if (spec.system_kind == SystemKind::Discrete) {
    switch (spec.set_kind) {
      case SetKind::Polyhedron: {
        const Polyhedron& p = *spec.polyhedron;
        for (int i = 0; i < p.num_rows(); ++i) {
          const Expr hyp =
              Expr::constant(p.b[static_cast<std::size_t>(i)]) - field_dot(p.G.row(i), f);
          ShapeReport rep = probe(hyp, cfg.box, 512, cfg.seed);
          rep.target = "b_" + std::to_string(i + 1) + " - G_" + std::to_string(i + 1) +
                       "'f (needs convex)";
          probes.push_back(std::move(rep));
        }
        break;
      }
      case SetKind::Ellipsoid: {
        ShapeReport rep = probe(field_quadratic(spec.ellipsoid->Q, f), cfg.box, 512, cfg.seed);
        rep.target = "f'Qf (needs concave)";
        probes.push_back(std::move(rep));
        break;
      }
      case SetKind::Sublevel: {
        ShapeReport rg = probe(spec.sublevel->g, cfg.box, 512, cfg.seed);
        rg.target = "g (needs convex)";
        probes.push_back(std::move(rg));
        ShapeReport rf = probe(compose(spec.sublevel->g, f), cfg.box, 512, cfg.seed);
        rf.target = "g(f(x)) (needs concave)";
        probes.push_back(std::move(rf));
        break;
      }
    }
    return probes;
  }
  switch (spec.set_kind) {
    case SetKind::Polyhedron: {
      const Polyhedron& p = *spec.polyhedron;
      for (int i = 0; i < p.num_rows(); ++i) {
        ShapeReport rep = probe(field_dot(p.G.row(i), f), cfg.box, 512, cfg.seed);
        rep.target = "G_" + std::to_string(i + 1) + "'f (concave makes the face problem convex)";
        probes.push_back(std::move(rep));
      }
      break;
    }
    case SetKind::Ellipsoid: {
      Expr obj = Expr::constant(0.0);
      for (int i = 0; i < n; ++i)
        obj = obj + f.components[static_cast<std::size_t>(i)] * linear_form(spec.ellipsoid->Q.row(i));
      ShapeReport rep = probe(obj, cfg.box, 512, cfg.seed);
      rep.target = "f'Qx boundary objective";
      probes.push_back(std::move(rep));
      break;
    }
    case SetKind::Sublevel: {
      ShapeReport rg = probe(spec.sublevel->g, cfg.box, 512, cfg.seed);
      rg.target = "g (set must be convex)";
      probes.push_back(std::move(rg));
      break;
    }
  }
  return probes;
}

void dump_samples_csv(const std::string& path, const ProblemSpec& spec, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open dump file " + path);
  const CandidateSet set = spec.set();
  const int n = spec.dimension;
  for (int j = 1; j <= n; ++j) out << "x" << j << ",";
  out << "region\n";
  out.precision(17);
  const auto write = [&](const std::vector<Vec>& pts, const char* label) {
    for (const Vec& p : pts) {
      for (double c : p) out << c << ",";
      out << label << "\n";
    }
  };
  try {
    write(sample(set, Region::interior(), 200, seed), "interior");
  } catch (const Error&) {
  }
  try {
    write(sample(set, Region::boundary(), 200, seed + 1), "boundary");
  } catch (const Error&) {
  }
}

}  // namespace

RunOutcome run_command(const std::string& command, const json& problem_json,
                       const CliOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ProblemSpec spec = parse_problem(problem_json);
  const std::uint64_t seed = resolve_seed(spec, opts, opts.env_seed);
  const OptConfig cfg = build_config(spec, opts, seed);

  std::vector<std::string> notes;
  std::optional<CheckVerdict> verdict;
  std::optional<FalsifyOutcome> oracle;
  std::optional<CheckVerdict> epsilon_check;
  std::vector<ShapeReport> probes;
  int exit_code = kExitInconclusive;

  if (command == "probe") {
    probes = dispatch_probe(spec, cfg);
    exit_code = kExitVerified;
  } else if (command == "falsify") {
    const int samples = spec.falsify_samples.value_or(1000);
    const double horizon =
        spec.falsify_horizon.value_or(spec.system_kind == SystemKind::Discrete ? 50.0 : 10.0);
    oracle = falsify(spec.set(), spec.system_kind, spec.dynamics, samples, horizon, seed);
    exit_code = oracle->escape ? kExitFalsified : kExitInconclusive;
    if (!oracle->escape) notes.push_back("no escape found at the configured effort");
  } else if (command == "check" || command == "certify") {
    try {
      verdict = dispatch_check(spec, cfg, command == "certify", notes);
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      CheckVerdict v;
      v.status = CheckStatus::Inconclusive;
      v.notes.push_back(std::string("checker error: ") + e.what());
      verdict = std::move(v);
    }
    switch (verdict->status) {
      case CheckStatus::Verified:
        exit_code = kExitVerified;
        break;
      case CheckStatus::Falsified:
        exit_code = kExitFalsified;
        break;
      case CheckStatus::Inconclusive:
        exit_code = kExitInconclusive;
        break;
    }
    // lightweight trajectory cross-check
    try {
      const double horizon = spec.system_kind == SystemKind::Discrete ? 20.0 : 5.0;
      oracle = falsify(spec.set(), spec.system_kind, spec.dynamics, 200, horizon, seed + 101);
      if (oracle->escape && verdict->status == CheckStatus::Verified)
        notes.push_back("WARNING: oracle found an escape despite a VERIFIED verdict");
    } catch (const Error& e) {
      notes.push_back(std::string("oracle cross-check unavailable: ") + e.what());
    }
    if (spec.system_kind == SystemKind::Discrete && spec.set_kind == SetKind::Sublevel) {
      try {
        epsilon_check = epsilon_implication(spec.sublevel->g, spec.sublevel->g, spec.dynamics, cfg);
      } catch (const Error& e) {
        notes.push_back(std::string("epsilon cross-check unavailable: ") + e.what());
      }
    }
  } else {
    throw UsageError("unknown command " + command);
  }

  if (opts.dump_samples) dump_samples_csv(*opts.dump_samples, spec, seed);

  RunOutcome out;
  out.exit_code = exit_code;
  out.report = make_report(command, spec, seed, verdict, oracle, probes, epsilon_check, notes);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

json center_ellipsoid_helper(const Mat& q, const Vec& center, SystemKind kind,
                             const std::vector<std::string>& dynamics_text) {
  const int n = q.rows;
  if (static_cast<int>(center.size()) != n) throw DimensionError("center length mismatch");
  (void)Ellipsoid(q);  // validates symmetry and positive definiteness

  // substitute x -> x + c; discrete maps additionally subtract c to keep the
  // fixed frame (y_{k+1} = f(y_k + c) - c), continuous fields do not
  std::vector<Expr> shifted_vars;
  shifted_vars.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    shifted_vars.push_back(Expr::variable(i + 1) +
                           Expr::constant(center[static_cast<std::size_t>(i)]));

  json dynamics = json::array();
  for (int i = 0; i < n; ++i) {
    Expr e = parse_expr(dynamics_text[static_cast<std::size_t>(i)], n);
    e = e.substitute(shifted_vars);
    if (kind == SystemKind::Discrete)
      e = e - Expr::constant(center[static_cast<std::size_t>(i)]);
    dynamics.push_back(e.str());
  }

  json out;
  out["dimension"] = n;
  out["system"] = {{"kind", kind == SystemKind::Discrete ? "discrete" : "continuous"},
                   {"dynamics", dynamics}};
  json qj = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(q(i, j));
    qj.push_back(std::move(row));
  }
  out["set"] = {{"kind", "ellipsoid"}, {"Q", qj}};
  return out;
}

RunOutcome run_center(const json& input) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!input.is_object()) throw SchemaError("", "input must be a JSON object");
  for (const char* key : {"dimension", "system", "Q", "center"})
    if (!input.contains(key)) throw SchemaError(std::string("/") + key, "missing required field");
  const json& dim_j = input.at("dimension");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1)
    throw SchemaError("/dimension", "must be a positive integer");
  const int n = static_cast<int>(dim_j.get<long long>());

  const json& sys = input.at("system");
  if (!sys.is_object() || !sys.contains("kind") || !sys.contains("dynamics"))
    throw SchemaError("/system", "must contain kind and dynamics");
  const std::string kind_s = sys.at("kind").is_string() ? sys.at("kind").get<std::string>() : "";
  SystemKind kind;
  if (kind_s == "discrete")
    kind = SystemKind::Discrete;
  else if (kind_s == "continuous")
    kind = SystemKind::Continuous;
  else
    throw SchemaError("/system/kind", "must be \"discrete\" or \"continuous\"");
  const json& dyn = sys.at("dynamics");
  if (!dyn.is_array() || static_cast<int>(dyn.size()) != n)
    throw SchemaError("/system/dynamics", "must list " + std::to_string(n) + " expressions");
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < dyn.size(); ++i) {
    if (!dyn[i].is_string())
      throw SchemaError("/system/dynamics/" + std::to_string(i), "must be a string");
    texts.push_back(dyn[i].get<std::string>());
  }

  const json& qj = input.at("Q");
  if (!qj.is_array() || static_cast<int>(qj.size()) != n) throw SchemaError("/Q", "must be n x n");
  std::vector<double> qdata;
  for (std::size_t i = 0; i < qj.size(); ++i) {
    if (!qj[i].is_array() || static_cast<int>(qj[i].size()) != n)
      throw SchemaError("/Q/" + std::to_string(i), "must have n entries");
    for (const auto& v : qj[i]) {
      if (!v.is_number()) throw SchemaError("/Q/" + std::to_string(i), "entries must be numbers");
      qdata.push_back(v.get<double>());
    }
  }
  const json& cj = input.at("center");
  if (!cj.is_array() || static_cast<int>(cj.size()) != n)
    throw SchemaError("/center", "must have n entries");
  Vec center;
  for (const auto& v : cj) {
    if (!v.is_number()) throw SchemaError("/center", "entries must be numbers");
    center.push_back(v.get<double>());
  }

  RunOutcome out;
  try {
    out.report = center_ellipsoid_helper(Mat(n, n, std::move(qdata)), center, kind, texts);
  } catch (const SyntaxError& e) {
    throw SchemaError("/system/dynamics", e.what());
  } catch (const NotPositiveDefinite& e) {
    throw SchemaError("/Q", e.what());
  }
  out.exit_code = kExitVerified;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace invacheck::cli
