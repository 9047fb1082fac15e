#pragma once
// Helpers shared by the unit and acceptance tests. The matrix code here is
// deliberately separate from dta/linalg.hpp so that oracles built on it do not
// share arithmetic with the code under test.

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "dta/linalg.hpp"
#include "dta/study.hpp"

namespace test {

using M = std::array<double, 4>;  // row-major 2x2

inline M mk(const dta::Sym2& s) { return {s.a11, s.a12, s.a12, s.a22}; }

inline M mul(const M& a, const M& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline M inv(const M& a) {
  const double det = a[0] * a[3] - a[1] * a[2];
  return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

inline M add(const M& a, const M& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

inline M scale(double s, const M& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

inline double tr(const M& a) { return a[0] + a[3]; }

inline bool near_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Random PD matrix with eigenvalues in [lo, hi].
inline dta::Sym2 random_pd(std::mt19937_64& g, double lo = 0.1, double hi = 2.0) {
  std::uniform_real_distribution<double> ev(lo, hi), ang(0.0, 3.141592653589793);
  const double l1 = ev(g), l2 = ev(g), t = ang(g);
  const double c = std::cos(t), s = std::sin(t);
  return {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
}

inline dta::Dataset make_dataset(const std::vector<dta::Vec2>& ys, const std::vector<dta::Vec2>& within) {
  std::vector<dta::Study> s(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    s[i] = {"s" + std::to_string(i + 1), ys[i].x, ys[i].y, within[i].x, within[i].y};
  }
  return dta::Dataset(std::move(s));
}

inline dta::Dataset make_dataset(const std::vector<dta::Vec2>& ys, dta::Vec2 within) {
  return make_dataset(ys, std::vector<dta::Vec2>(ys.size(), within));
}

/// Standard normal CDF and the law of 0.25 chi2_1 conditioned on [lo, hi].
inline double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double scaled_chi2_1_cdf(double v, double scale) {
  return v <= 0.0 ? 0.0 : std::erf(std::sqrt(v / (2.0 * scale)));
}

inline double truncated_cdf(double v, double scale, double lo, double hi) {
  if (v <= lo) return 0.0;
  if (v >= hi) return 1.0;
  const double flo = scaled_chi2_1_cdf(lo, scale);
  return (scaled_chi2_1_cdf(v, scale) - flo) / (scaled_chi2_1_cdf(hi, scale) - flo);
}

/// Mean of 0.25 chi2_1 conditioned on [lo, hi] by composite Simpson quadrature
/// in z = sqrt(v / scale), where the density is the standard normal one.
inline double truncated_mean(double scale, double lo, double hi) {
  const double zlo = std::sqrt(lo / scale), zhi = std::sqrt(hi / scale);
  const int m = 20000;
  const double step = (zhi - zlo) / m;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double z = zlo + i * step;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double dens = std::exp(-0.5 * z * z);
    num += w * scale * z * z * dens;
    den += w * dens;
  }
  return num / den;
}

}  // namespace test
