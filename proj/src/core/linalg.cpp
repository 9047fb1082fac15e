#include "dta/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dta {

namespace {

// Relative threshold below which a determinant is treated as zero.
constexpr double kSingularRelTol = 1e-14;

std::string describe(const Sym2& a) {
  return "[[" + std::to_string(a.a11) + ", " + std::to_string(a.a12) + "], [" +
         std::to_string(a.a12) + ", " + std::to_string(a.a22) + "]]";
}

}  // namespace

Sym2 Sym2::psd(double a11, double a12, double a22, double tol) {
  const Sym2 m{a11, a12, a22};
  if (!m.is_psd(tol)) {
    throw NotPositiveDefinite("matrix is not positive semi-definite: " + describe(m));
  }
  return m;
}

bool Sym2::is_psd(double tol) const {
  if (!is_finite()) return false;
  return a11 >= -tol && a22 >= -tol && det() >= -tol;
}

Sym2 Sym2::inverse() const {
  const double d = det();
  const double scale = std::max({std::abs(a11 * a22), a12 * a12, std::numeric_limits<double>::min()});
  if (!std::isfinite(d) || std::abs(d) <= kSingularRelTol * scale) {
    throw SingularMatrix("singular 2x2 matrix: " + describe(*this));
  }
  return {a22 / d, -a12 / d, a11 / d};
}

Lower2 Sym2::cholesky() const {
  if (!(a11 > 0.0)) throw NotPositiveDefinite("Cholesky of non-PD matrix: " + describe(*this));
  const double l11 = std::sqrt(a11);
  const double l21 = a12 / l11;
  const double rem = a22 - l21 * l21;
  if (!(rem > 0.0)) throw NotPositiveDefinite("Cholesky of non-PD matrix: " + describe(*this));
  return {l11, l21, std::sqrt(rem)};
}

double Sym2::inverse_quadform(const Vec2& v) const {
  const double d = det();
  if (!(d > 0.0) && !(d < 0.0)) throw SingularMatrix("singular 2x2 matrix: " + describe(*this));
  return (a22 * v.x * v.x - 2.0 * a12 * v.x * v.y + a11 * v.y * v.y) / d;
}

SymEigen eigen(const Sym2& a) {
  const double mean = 0.5 * (a.a11 + a.a22);
  const double half_diff = 0.5 * (a.a11 - a.a22);
  const double radius = std::hypot(half_diff, a.a12);
  SymEigen e;
  e.lambda1 = mean + radius;
  e.lambda2 = mean - radius;
  if (radius == 0.0) {
    e.v1 = {1.0, 0.0};
    e.v2 = {0.0, 1.0};
    return e;
  }
  // Rotation angle of the principal axis.
  const double theta = 0.5 * std::atan2(2.0 * a.a12, a.a11 - a.a22);
  e.v1 = {std::cos(theta), std::sin(theta)};
  e.v2 = {-std::sin(theta), std::cos(theta)};
  return e;
}

Sym2 psd_projection(const Sym2& a) {
  const SymEigen e = eigen(a);
  if (e.lambda2 >= 0.0) return a;
  const double l1 = std::max(e.lambda1, 0.0);
  return l1 * Sym2::outer(e.v1);
}

}  // namespace dta
