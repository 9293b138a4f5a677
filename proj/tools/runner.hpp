// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "problem.hpp"

namespace invacheck::cli {

struct CliOptions {
  std::optional<std::uint64_t> seed;      // --seed (highest precedence)
  std::optional<std::uint64_t> env_seed;  // INVACHECK_SEED fallback
  std::optional<std::pair<double, double>> box;
  std::optional<int> starts;
  std::optional<std::string> dump_samples;  // CSV path
};

struct RunOutcome {
  int exit_code = 64;
  json report;
  double wall_seconds = 0.0;
};

// Exit codes: 0 VERIFIED, 1 FALSIFIED, 2 INCONCLUSIVE, 64 usage/parse error.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

/// Dispatches one of check/certify/falsify/probe on a parsed problem file.
RunOutcome run_command(const std::string& command, const json& problem_json,
                       const CliOptions& opts);

/// Shifts an ellipsoid centered at `center` (and the dynamics) into the
/// origin-centered normal form: discrete maps become f(x + c) - c, continuous
/// fields become f(x + c).
json center_ellipsoid_helper(const Mat& q, const Vec& center, SystemKind kind,
                             const std::vector<std::string>& dynamics_text);

/// `center` subcommand entry: reads {dimension, system, Q, center}.
RunOutcome run_center(const json& input);

}  // namespace invacheck::cli
