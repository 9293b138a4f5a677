// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "invacheck/errors.hpp"

namespace invacheck {

using Vec = std::vector<double>;

// Axis-aligned search domain.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw DimensionError("box bounds differ in length");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw DimensionError("box is empty in some coordinate");
  }

  static Box symmetric(int dim, double half = 100.0) {
    return Box(Vec(static_cast<std::size_t>(dim), -half), Vec(static_cast<std::size_t>(dim), half));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  Vec clamp(Vec x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lo[i]) x[i] = lo[i];
      if (x[i] > hi[i]) x[i] = hi[i];
    }
    return x;
  }
};

}  // namespace invacheck
