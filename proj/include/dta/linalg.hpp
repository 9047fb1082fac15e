#pragma once

// Fixed-size 2-vector and 2x2 matrix arithmetic. Everything in the model is
// bivariate, so these small value types replace a general matrix library.

#include <cmath>
#include <stdexcept>

#include "dta/errors.hpp"

namespace dta {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// General (not necessarily symmetric) 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transposed() const { return {a11, a21, a12, a22}; }

  constexpr Mat2& operator+=(const Mat2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a21 += o.a21;
    a22 += o.a22;
    return *this;
  }
  friend constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Lower-triangular Cholesky factor [[l11, 0], [l21, l22]].
struct Lower2 {
  double l11 = 0.0;
  double l21 = 0.0;
  double l22 = 0.0;

  constexpr Vec2 operator*(const Vec2& v) const { return {l11 * v.x, l21 * v.x + l22 * v.y}; }
};

/// Symmetric 2x2 matrix; only the upper triangle is stored, so symmetry holds
/// by construction.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  constexpr Sym2() = default;
  constexpr Sym2(double a11_, double a12_, double a22_) : a11(a11_), a12(a12_), a22(a22_) {}

  static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static constexpr Sym2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
  static constexpr Sym2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

  /// Checked constructor for matrices that must be positive semi-definite.
  /// Throws NotPositiveDefinite when a diagonal entry is negative or the
  /// determinant falls below -tol.
  static Sym2 psd(double a11, double a12, double a22, double tol = 1e-12);

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a12; }
  bool is_psd(double tol = 1e-12) const;
  bool is_pd() const { return a11 > 0.0 && det() > 0.0; }
  bool is_finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a22);
  }

  /// Inverse; throws SingularMatrix when the determinant is numerically zero.
  Sym2 inverse() const;
  /// Lower Cholesky factor; throws NotPositiveDefinite unless strictly PD.
  Lower2 cholesky() const;
  /// v^t A v.
  constexpr double quadform(const Vec2& v) const {
    return a11 * v.x * v.x + 2.0 * a12 * v.x * v.y + a22 * v.y * v.y;
  }
  /// v^t A^{-1} v without forming the inverse explicitly.
  double inverse_quadform(const Vec2& v) const;

  constexpr Mat2 full() const { return {a11, a12, a12, a22}; }

  constexpr Sym2& operator+=(const Sym2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a22 += o.a22;
    return *this;
  }
  constexpr Sym2& operator-=(const Sym2& o) {
    a11 -= o.a11;
    a12 -= o.a12;
    a22 -= o.a22;
    return *this;
  }
  constexpr Sym2& operator*=(double s) {
    a11 *= s;
    a12 *= s;
    a22 *= s;
    return *this;
  }
  friend constexpr Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend constexpr Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend constexpr Sym2 operator*(double s, Sym2 a) { return a *= s; }
  friend constexpr Sym2 operator*(Sym2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(const Sym2& a, const Vec2& v) {
    return {a.a11 * v.x + a.a12 * v.y, a.a12 * v.x + a.a22 * v.y};
  }
  friend constexpr bool operator==(const Sym2&, const Sym2&) = default;
};

constexpr Mat2 operator*(const Sym2& a, const Sym2& b) { return a.full() * b.full(); }
constexpr Mat2 operator*(const Mat2& a, const Sym2& b) { return a * b.full(); }
constexpr Mat2 operator*(const Sym2& a, const Mat2& b) { return a.full() * b; }

/// A B A for symmetric A and B; the result is symmetric and returned as such.
constexpr Sym2 sandwich(const Sym2& a, const Sym2& b) {
  const Mat2 ab = a * b;
  const Mat2 aba = ab * a;
  return {aba.a11, 0.5 * (aba.a12 + aba.a21), aba.a22};
}

/// tr(A B) for symmetric A, B.
constexpr double trace_product(const Sym2& a, const Sym2& b) {
  return a.a11 * b.a11 + 2.0 * a.a12 * b.a12 + a.a22 * b.a22;
}

/// tr(A B) for general A and symmetric B.
constexpr double trace_product(const Mat2& a, const Sym2& b) {
  return a.a11 * b.a11 + (a.a12 + a.a21) * b.a12 + a.a22 * b.a22;
}

struct SymEigen {
  double lambda1 = 0.0;  // larger eigenvalue
  double lambda2 = 0.0;
  Vec2 v1;  // unit eigenvector for lambda1
  Vec2 v2;  // unit eigenvector for lambda2, orthogonal to v1
};

SymEigen eigen(const Sym2& a);

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to zero.
Sym2 psd_projection(const Sym2& a);

}  // namespace dta
