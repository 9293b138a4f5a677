// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invacheck/convexity.hpp"
#include "invacheck/linalg.hpp"
#include "invacheck/types.hpp"

namespace invacheck {

enum class CheckStatus { Verified, Falsified, Inconclusive };
enum class Exactness { Exact, Numerical };

// Global: the certificate inequality is asserted on all of R^n (under the
// stated curvature hypotheses).  Restricted: only on the candidate set, with
// no hypotheses.
enum class Mode { Global, Restricted };

// Algebraic witness: nonnegative matrix H for polyhedra, scalar beta for
// ellipsoids, scalar alpha for general convex sublevel sets.
struct Certificate {
  enum class Kind { HMatrix, Beta, Alpha };
  Kind kind = Kind::Beta;
  Mode mode = Mode::Global;
  Mat H;               // Kind::HMatrix
  double value = 0.0;  // Kind::Beta / Kind::Alpha
};

// Per-face outcome of a boundary maximization (continuous checks).
struct FaceOutcome {
  int face = -1;  // -1 = whole boundary
  double max_value = 0.0;
  Vec maximizer;
  int samples = 0;
  bool empty = false;
};

struct BoundaryReport {
  std::vector<FaceOutcome> faces;
  double overall_max = 0.0;
  Vec maximizer;
};

struct CheckVerdict {
  CheckStatus status = CheckStatus::Inconclusive;
  Exactness exactness = Exactness::Numerical;
  std::optional<Certificate> certificate;
  std::optional<Vec> counterexample;
  std::vector<double> residual_minima;  // per row, or a single overall value
  std::vector<Vec> residual_argmins;
  std::vector<ShapeReport> hypotheses;
  std::optional<BoundaryReport> boundary;  // continuous checks only
  std::vector<std::string> notes;
  bool domain_flag = false;  // a noticeable share of evaluations hit NaN
};

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified:
      return "VERIFIED";
    case CheckStatus::Falsified:
      return "FALSIFIED";
    case CheckStatus::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

inline const char* to_string(Exactness e) {
  return e == Exactness::Exact ? "exact" : "numerical";
}

inline const char* to_string(Mode m) { return m == Mode::Global ? "global" : "restricted"; }

}  // namespace invacheck
