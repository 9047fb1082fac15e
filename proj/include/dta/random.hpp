#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

#include "dta/linalg.hpp"

namespace dta {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of an independent stream identified by (seed, ids...). Chained
/// SplitMix64 so that nearby ids give unrelated streams; stable across
/// releases.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t id : ids) h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

/// Deterministic random stream: mt19937_64 (bit-exact by the C++ standard)
/// with uniforms built from the top 53 bits and standard normals from the
/// Box-Muller transform, consumed in pairs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Draw from N(mean, cov) through the Cholesky factor of cov. A PSD but
  /// singular cov is handled by clamping the second pivot at zero.
  Vec2 normal2(const Vec2& mean, const Sym2& cov) {
    const double z1 = normal();
    const double z2 = normal();
    const double l11 = std::sqrt(std::max(cov.a11, 0.0));
    const double l21 = l11 > 0.0 ? cov.a12 / l11 : 0.0;
    const double l22 = std::sqrt(std::max(cov.a22 - l21 * l21, 0.0));
    return {mean.x + l11 * z1, mean.y + l21 * z1 + l22 * z2};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dta
