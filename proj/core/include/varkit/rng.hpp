#pragma once

#include <cstdint>

#include "varkit/types.hpp"

namespace varkit {

/// splitmix64 stream. Distributions are computed here rather than through
/// <random> so that sampled verdicts are bit-reproducible across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for draw `index` under `seed`; used so parallel
  /// sampling does not depend on scheduling.
  static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }
  /// Uniform on the open interval (0, 1).
  double open_unit() noexcept;
  double normal() noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;

  Point uniform_in(const Box& box) noexcept;
  /// Uniform direction on the unit sphere.
  Point unit_vector(int dim) noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace varkit
