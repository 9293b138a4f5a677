// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "invacheck/errors.hpp"
#include "invacheck/expr.hpp"
#include "invacheck/linalg.hpp"
#include "invacheck/oracle.hpp"
#include "invacheck/sets.hpp"
#include "invacheck/verdict.hpp"

namespace invacheck::cli {

using json = nlohmann::ordered_json;

// Problem-file violation; `pointer` is the JSON pointer of the offending field.
struct SchemaError : Error {
  SchemaError(std::string ptr, const std::string& message)
      : Error(ptr + ": " + message), pointer(std::move(ptr)) {}
  std::string pointer;
};

enum class SetKind { Polyhedron, Ellipsoid, Sublevel };

struct ProblemSpec {
  int dimension = 0;
  SystemKind system_kind = SystemKind::Discrete;
  std::vector<std::string> dynamics_text;
  VectorField dynamics;

  SetKind set_kind = SetKind::Polyhedron;
  std::optional<Polyhedron> polyhedron;
  std::optional<Ellipsoid> ellipsoid;
  std::optional<SublevelSet> sublevel;
  std::string g_text;

  Mode mode = Mode::Global;

  std::optional<Mat> cert_h;
  std::optional<double> cert_beta;
  std::optional<double> cert_alpha;

  std::optional<std::pair<double, double>> box;
  std::optional<std::uint64_t> seed;
  std::optional<int> opt_starts;
  std::optional<int> opt_max_iters;
  std::optional<int> falsify_samples;
  std::optional<double> falsify_horizon;

  json echo;  // normalized copy for the report

  CandidateSet set() const;
};

/// Validates and builds a ProblemSpec; throws SchemaError on any field-type
/// or shape violation.  The accepted schema is documented in docs/format.md.
ProblemSpec parse_problem(const json& j);

}  // namespace invacheck::cli
