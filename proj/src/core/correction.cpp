#include "dta/correction.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dta/errors.hpp"
#include "dta/estimators.hpp"

namespace dta {

namespace {

// Coefficients of tr(P D) = p . (d11, d12, d22) for general P, symmetric D.
std::array<double, 3> trace_coeffs(const Mat2& p) { return {p.a11, p.a12 + p.a21, p.a22}; }

double trace_square(const Mat2& m) { return (m * m).trace(); }

}  // namespace

BTerms b_star(const Dataset& d, const Sym2& sigma) {
  if (d.empty()) throw InsufficientStudies(0, 1);
  const std::size_t n = d.size();
  const double nn = static_cast<double>(n) * static_cast<double>(n);

  std::vector<Sym2> dm(n);
  std::vector<Sym2> dinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    dm[i] = sigma + d[i].within();
    dinv[i] = dm[i].inverse();
  }
  const Sym2 v = v_matrix(d, sigma);

  // b1: sum_{j,k} tr(V U_jik V U_kij) = tr(D_i A D_i A), A = sum_k D_k^-1 V D_k^-1.
  Sym2 a;
  for (std::size_t k = 0; k < n; ++k) a += sandwich(dinv[k], v);
  double b1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) b1 += trace_square(dm[i] * a);
  b1 *= 2.0 / nn;

  // First part of b2: sum_i tr{(sum_j U_jij V)^2}.
  double b2_first = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Sym2 u;
    for (std::size_t j = 0; j < n; ++j) u += sandwich(dinv[j], dm[i]);
    b2_first += trace_square(u * v);
  }

  // Second part of b2: sum_{i,j,k} tr(V U_ijk)^2. With P_ki = D_k^-1 V D_i^-1,
  // tr(V U_ijk) = tr(P_ki D_j) = p_ki . d_j, so the j-sum is p^t G p with
  // G = sum_j d_j d_j^t.
  std::array<std::array<double, 3>, 3> g{};
  for (std::size_t j = 0; j < n; ++j) {
    const std::array<double, 3> dj{dm[j].a11, dm[j].a12, dm[j].a22};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) g[r][c] += dj[r] * dj[c];
  }
  double b2_second = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2 kv = dinv[k] * v;
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<double, 3> p = trace_coeffs(kv * dinv[i]);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) b2_second += p[r] * g[r][c] * p[c];
    }
  }
  const double b2 = (b2_first + b2_second) / nn;

  // b3 = b2 - sum_{i,j} tr(V U_iji D_j D_i^-1) - sum_{i,j} tr(D_i^-1 D_j) tr(V U_iji).
  double b3_first = 0.0;
  double b3_second = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Sym2 u = sandwich(dinv[i], dm[j]);
      b3_first += ((v * u) * (dm[j] * dinv[i])).trace();
      b3_second += trace_product(dinv[i], dm[j]) * trace_product(v, u);
    }
  }
  const double b3 = b2 - (b3_first + b3_second) / nn;

  return {b1, b2, b3};
}

double h_adjust(const BTerms& b, int k, double x) {
  if (k < 1) throw DomainError("h_adjust: k must be >= 1");
  if (!(x > 0.0)) throw DomainError("h_adjust: x must be > 0");
  const double kk = static_cast<double>(k);
  const double first = b.b1 / 4.0 - b.b2 / 2.0 + 2.0 * b.b3;
  const double second = b.b1 / 4.0 + b.b2 / 2.0;
  return -first / kk + x * second / (kk * (kk + 2.0));
}

double chi2_cdf(double x, int k) {
  if (k < 1) throw DomainError("chi2_cdf: k must be >= 1");
  if (!(x > 0.0)) return 0.0;
  if (k == 2) return -std::expm1(-0.5 * x);
  return boost::math::gamma_p(0.5 * k, 0.5 * x);
}

double chi2_pdf(double x, int k) {
  if (k < 1) throw DomainError("chi2_pdf: k must be >= 1");
  if (!(x > 0.0)) return 0.0;
  if (k == 2) return 0.5 * std::exp(-0.5 * x);
  return 0.5 * boost::math::gamma_p_derivative(0.5 * k, 0.5 * x);
}

double chi2_quantile(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("chi2_quantile: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (k < 1) throw DomainError("chi2_quantile: k must be >= 1");
  if (k == 2) return -2.0 * std::log(alpha);

  const double kk = static_cast<double>(k);
  auto upper = [&](double x) { return boost::math::gamma_q(0.5 * kk, 0.5 * x); };

  // Wilson-Hilferty start.
  const double z = std::sqrt(2.0) * boost::math::erfc_inv(2.0 * alpha);
  const double c = 2.0 / (9.0 * kk);
  double x = kk * std::pow(std::max(1.0 - c + z * std::sqrt(c), 1e-3), 3.0);

  // Keep a bracket so Newton can fall back to bisection.
  double lo = 0.0;
  double hi = std::max(2.0 * x, 1.0);
  while (upper(hi) > alpha) hi *= 2.0;

  for (int it = 0; it < 200; ++it) {
    const double g = upper(x) - alpha;
    if (g > 0.0) lo = x; else hi = x;
    const double slope = -chi2_pdf(x, k);
    double next = slope != 0.0 ? x - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-13 * std::max(1.0, x)) return next;
    x = next;
  }
  return x;
}

}  // namespace dta
