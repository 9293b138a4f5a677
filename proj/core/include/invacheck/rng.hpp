// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "invacheck/types.hpp"

namespace invacheck {

// Deterministic random source.  std::mt19937_64's output sequence is pinned by
// the standard, and all distributions below are built from raw engine bits, so
// a given seed produces the same doubles on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Unit vector on the sphere in R^dim.
  Vec unit_vector(int dim) {
    Vec v(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& c : v) {
        c = normal();
        norm2 += c * c;
      }
    } while (norm2 < 1e-30);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : v) c *= inv;
    return v;
  }

  // Substream derivation (splitmix64 finalizer over seed xor stream).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Radical-inverse (Halton) low-discrepancy sequence.  Index prefixes are
// nested, so enlarging a sample budget only appends points.
inline double halton(std::uint64_t index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

inline Vec halton_point(std::uint64_t index, int dim) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                    41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  Vec p(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = halton(index, kPrimes[i % 24]);
  return p;
}

inline Vec halton_in_box(std::uint64_t index, const Box& box) {
  Vec p = halton_point(index, box.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * p[i];
  return p;
}

}  // namespace invacheck
