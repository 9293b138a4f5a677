// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "problem.hpp"

#include "invacheck/convexity.hpp"
#include "invacheck/oracle.hpp"
#include "invacheck/verdict.hpp"

namespace invacheck::cli {

json to_json(const ShapeReport& r);
json to_json(const Certificate& c);
json to_json(const CheckVerdict& v);
json to_json(const EscapeReport& r);
json to_json(const FalsifyOutcome& o);

/// Machine-readable report.  Timings are deliberately excluded so that two
/// runs with the same file, seed, and version serialize byte-identically;
/// wall time goes to the --summary digest instead.
json make_report(const std::string& command, const ProblemSpec& spec, std::uint64_t seed,
                 const std::optional<CheckVerdict>& verdict,
                 const std::optional<FalsifyOutcome>& oracle,
                 const std::vector<ShapeReport>& probes,
                 const std::optional<CheckVerdict>& epsilon_check,
                 const std::vector<std::string>& extra_notes);

std::string summarize(const json& report, double wall_seconds);

}  // namespace invacheck::cli
