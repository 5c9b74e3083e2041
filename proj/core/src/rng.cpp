#include "varkit/rng.hpp"

#include <cmath>
#include <numbers>


namespace varkit {

namespace {
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return Rng(mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL)));
}

std::uint64_t Rng::next() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::open_unit() noexcept {
  return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() noexcept {
  const double u1 = open_unit();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

Point Rng::uniform_in(const Box& box) noexcept {
  Point p(box.dim());
  for (int i = 0; i < box.dim(); ++i) p[i] = uniform(box.lo[i], box.hi[i]);
  return p;
}

Point Rng::unit_vector(int dim) noexcept {
  Point p(dim);
  do {
    for (int i = 0; i < dim; ++i) p[i] = normal();
  } while (p.norm() == 0.0);
  return p / p.norm();
}

}  // namespace varkit
