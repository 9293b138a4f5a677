// SPDX-License-Identifier: Apache-2.0
#include "problem.hpp"

#include <cmath>
#include <set>

namespace invacheck::cli {

namespace {

const json& require(const json& j, const std::string& parent, const char* key) {
  if (!j.contains(key)) throw SchemaError(parent + "/" + key, "missing required field");
  return j.at(key);
}

int require_positive_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw SchemaError(ptr, "must be a positive integer");
  return static_cast<int>(v.get<long long>());
}

double require_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw SchemaError(ptr, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(ptr, "must be finite");
  return d;
}

std::string require_string(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw SchemaError(ptr, "must be a string");
  return v.get<std::string>();
}

Vec require_vector(const json& v, const std::string& ptr, int expect_len) {
  if (!v.is_array()) throw SchemaError(ptr, "must be an array of numbers");
  if (expect_len >= 0 && static_cast<int>(v.size()) != expect_len)
    throw SchemaError(ptr, "must have length " + std::to_string(expect_len));
  Vec out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(require_number(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

Mat require_matrix(const json& v, const std::string& ptr, int expect_rows, int expect_cols) {
  if (!v.is_array() || v.empty()) throw SchemaError(ptr, "must be a non-empty 2D array");
  const int rows = static_cast<int>(v.size());
  if (expect_rows >= 0 && rows != expect_rows)
    throw SchemaError(ptr, "must have " + std::to_string(expect_rows) + " rows");
  int cols = -1;
  std::vector<double> data;
  for (int i = 0; i < rows; ++i) {
    const std::string rptr = ptr + "/" + std::to_string(i);
    const Vec row = require_vector(v[static_cast<std::size_t>(i)], rptr, cols);
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      if (cols < 1) throw SchemaError(rptr, "rows must be non-empty");
      if (expect_cols >= 0 && cols != expect_cols)
        throw SchemaError(rptr, "must have " + std::to_string(expect_cols) + " columns");
      data.reserve(static_cast<std::size_t>(rows) * cols);
      for (double d : row) data.push_back(d);
    } else {
      for (double d : row) data.push_back(d);
    }
  }
  return Mat(rows, cols, std::move(data));
}

void reject_unknown(const json& obj, const std::string& parent,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError(parent + "/" + it.key(), "unknown field");
}

}  // namespace

CandidateSet ProblemSpec::set() const {
  switch (set_kind) {
    case SetKind::Polyhedron:
      return CandidateSet{*polyhedron};
    case SetKind::Ellipsoid:
      return CandidateSet{*ellipsoid};
    case SetKind::Sublevel:
      return CandidateSet{*sublevel};
  }
  throw Error("unreachable");
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) throw SchemaError("", "problem file must be a JSON object");
  reject_unknown(j, "", {"dimension", "system", "set", "mode", "certificate", "box", "seed",
                         "optimizer", "falsify"});

  ProblemSpec spec;
  spec.dimension = require_positive_int(require(j, "", "dimension"), "/dimension");
  const int n = spec.dimension;

  {
    const json& sys = require(j, "", "system");
    if (!sys.is_object()) throw SchemaError("/system", "must be an object");
    reject_unknown(sys, "/system", {"kind", "dynamics"});
    const std::string kind = require_string(require(sys, "/system", "kind"), "/system/kind");
    if (kind == "discrete")
      spec.system_kind = SystemKind::Discrete;
    else if (kind == "continuous")
      spec.system_kind = SystemKind::Continuous;
    else
      throw SchemaError("/system/kind", "must be \"discrete\" or \"continuous\"");

    const json& dyn = require(sys, "/system", "dynamics");
    if (!dyn.is_array() || static_cast<int>(dyn.size()) != n)
      throw SchemaError("/system/dynamics",
                        "must be an array of " + std::to_string(n) + " expression strings");
    for (std::size_t i = 0; i < dyn.size(); ++i) {
      const std::string ptr = "/system/dynamics/" + std::to_string(i);
      const std::string text = require_string(dyn[i], ptr);
      try {
        spec.dynamics_text.push_back(text);
        (void)parse_expr(text, n);
      } catch (const SyntaxError& e) {
        throw SchemaError(ptr, e.what());
      } catch (const DimensionError& e) {
        throw SchemaError(ptr, e.what());
      }
    }
    spec.dynamics = parse_vector_field(spec.dynamics_text);
    if (spec.dynamics.dim != n) throw SchemaError("/system/dynamics", "dimension mismatch");
  }

  {
    const json& set = require(j, "", "set");
    if (!set.is_object()) throw SchemaError("/set", "must be an object");
    const std::string kind = require_string(require(set, "/set", "kind"), "/set/kind");
    if (kind == "polyhedron") {
      reject_unknown(set, "/set", {"kind", "G", "b"});
      spec.set_kind = SetKind::Polyhedron;
      Mat g = require_matrix(require(set, "/set", "G"), "/set/G", -1, n);
      Vec b = require_vector(require(set, "/set", "b"), "/set/b", g.rows);
      spec.polyhedron.emplace(std::move(g), std::move(b));
    } else if (kind == "ellipsoid") {
      reject_unknown(set, "/set", {"kind", "Q"});
      spec.set_kind = SetKind::Ellipsoid;
      Mat q = require_matrix(require(set, "/set", "Q"), "/set/Q", n, n);
      try {
        spec.ellipsoid.emplace(std::move(q));
      } catch (const NotPositiveDefinite& e) {
        throw SchemaError("/set/Q", e.what());
      }
    } else if (kind == "sublevel") {
      reject_unknown(set, "/set", {"kind", "g", "interior_hint"});
      spec.set_kind = SetKind::Sublevel;
      spec.g_text = require_string(require(set, "/set", "g"), "/set/g");
      Expr g;
      try {
        g = parse_expr(spec.g_text, n);
      } catch (const SyntaxError& e) {
        throw SchemaError("/set/g", e.what());
      } catch (const DimensionError& e) {
        throw SchemaError("/set/g", e.what());
      }
      spec.sublevel.emplace(std::move(g), n);
      if (set.contains("interior_hint"))
        spec.sublevel->interior_hint =
            require_vector(set.at("interior_hint"), "/set/interior_hint", n);
    } else {
      throw SchemaError("/set/kind", "must be \"polyhedron\", \"ellipsoid\", or \"sublevel\"");
    }
  }

  if (j.contains("mode")) {
    const std::string mode = require_string(j.at("mode"), "/mode");
    if (mode == "global")
      spec.mode = Mode::Global;
    else if (mode == "restricted")
      spec.mode = Mode::Restricted;
    else
      throw SchemaError("/mode", "must be \"global\" or \"restricted\"");
  }

  if (j.contains("certificate")) {
    const json& cert = j.at("certificate");
    if (!cert.is_object()) throw SchemaError("/certificate", "must be an object");
    reject_unknown(cert, "/certificate", {"H", "beta", "alpha"});
    if (cert.size() != 1)
      throw SchemaError("/certificate", "must contain exactly one of H, beta, alpha");
    if (cert.contains("H")) {
      if (spec.set_kind != SetKind::Polyhedron)
        throw SchemaError("/certificate/H", "H certificates apply to polyhedra only");
      const int m = spec.polyhedron->num_rows();
      spec.cert_h = require_matrix(cert.at("H"), "/certificate/H", m, m);
      for (double v : spec.cert_h->data)
        if (v < -1e-12) throw SchemaError("/certificate/H", "entries must be nonnegative");
    } else if (cert.contains("beta")) {
      if (spec.set_kind != SetKind::Ellipsoid)
        throw SchemaError("/certificate/beta", "beta certificates apply to ellipsoids only");
      spec.cert_beta = require_number(cert.at("beta"), "/certificate/beta");
      if (*spec.cert_beta < 0.0) throw SchemaError("/certificate/beta", "must be nonnegative");
    } else {
      if (spec.set_kind != SetKind::Sublevel)
        throw SchemaError("/certificate/alpha", "alpha certificates apply to sublevel sets only");
      spec.cert_alpha = require_number(cert.at("alpha"), "/certificate/alpha");
      if (*spec.cert_alpha < 0.0) throw SchemaError("/certificate/alpha", "must be nonnegative");
    }
  }

  if (j.contains("box")) {
    const Vec b = require_vector(j.at("box"), "/box", 2);
    if (!(b[0] < b[1])) throw SchemaError("/box", "must satisfy lo < hi");
    spec.box = {b[0], b[1]};
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0)
      throw SchemaError("/seed", "must be a nonnegative integer");
    spec.seed = static_cast<std::uint64_t>(s.get<long long>());
  }

  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    if (!o.is_object()) throw SchemaError("/optimizer", "must be an object");
    reject_unknown(o, "/optimizer", {"starts", "max_iters"});
    if (o.contains("starts"))
      spec.opt_starts = require_positive_int(o.at("starts"), "/optimizer/starts");
    if (o.contains("max_iters"))
      spec.opt_max_iters = require_positive_int(o.at("max_iters"), "/optimizer/max_iters");
  }

  if (j.contains("falsify")) {
    const json& o = j.at("falsify");
    if (!o.is_object()) throw SchemaError("/falsify", "must be an object");
    reject_unknown(o, "/falsify", {"samples", "horizon"});
    if (o.contains("samples"))
      spec.falsify_samples = require_positive_int(o.at("samples"), "/falsify/samples");
    if (o.contains("horizon")) {
      const double h = require_number(o.at("horizon"), "/falsify/horizon");
      if (h <= 0.0) throw SchemaError("/falsify/horizon", "must be positive");
      spec.falsify_horizon = h;
    }
  }

  spec.echo = j;
  return spec;
}

}  // namespace invacheck::cli
