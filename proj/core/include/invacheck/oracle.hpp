// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "invacheck/expr.hpp"
#include "invacheck/sets.hpp"

namespace invacheck {

// Brute-force falsification: propagate trajectories and report the first
// point that leaves the set.  A NaN state (map undefined, or floating-point
// blow-up) ends the trajectory as a domain event, not an escape.
struct EscapeReport {
  bool escaped = false;
  bool domain_event = false;
  int step = -1;       // discrete index, or RK4 step index
  double time = 0.0;   // continuous time of the event
  Vec start;
  Vec point;           // first point outside (or the last finite state)
  double margin = 0.0; // amount by which containment fails
};

/// Iterates x <- f(x) up to `steps` times; the start must lie in the set
/// (UsageError otherwise).  Escape is judged with tolerance tols::kEscape.
EscapeReport iterate_discrete(const VectorField& f, const Vec& x0, int steps,
                              const CandidateSet& set);

/// Classical fixed-step RK4 on dx/dt = f(x) up to time T with step h;
/// containment is checked after every step.
EscapeReport integrate_rk4(const VectorField& fc, const Vec& x0, double T, double h,
                           const CandidateSet& set);

enum class SystemKind { Discrete, Continuous };

struct FalsifyOutcome {
  std::optional<EscapeReport> escape;  // first escape in sample order
  int samples = 0;
  int domain_events = 0;
};

/// Samples interior and boundary-adjacent starts, propagates each, and
/// returns the first escape (deterministic in the seed).  `horizon` is a step
/// count for discrete systems and a final time for continuous ones.
FalsifyOutcome falsify(const CandidateSet& set, SystemKind kind, const VectorField& f,
                       int n_samples, double horizon, std::uint64_t seed);

}  // namespace invacheck
