#pragma once

#include <cmath>

#include "dta/linalg.hpp"
#include "dta/study.hpp"

namespace dta {

/// O(1/n) trace moments of K = (V(Sigma_hat) - V(Sigma)) V(Sigma)^{-1}:
/// b1 ~ E[tr(K)^2], b2 ~ tr(E[K^2]), b3 ~ tr(E[K]).
struct BTerms {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;

  friend constexpr bool operator==(const BTerms&, const BTerms&) = default;
};

/// Closed-form approximations of the B moments at D_i = sigma + S_i, valid
/// for the bias-corrected moment estimator. Runs in O(n^2); the sums are
/// regrouped from their triple-index form using cyclicity of the trace.
/// Values for n below three are returned but fall outside the range where the
/// expansion is meaningful.
BTerms b_star(const Dataset& d, const Sym2& sigma);

/// Threshold inflation h such that the coverage expansion of
/// {Q <= x (1 + h)} equals F_k(x) up to o(1/n):
///   h = -(b1/4 - b2/2 + 2 b3) / k + x (b1/4 + b2/2) / (k (k + 2)).
/// No clamping is applied.
double h_adjust(const BTerms& b, int k, double x);

/// |h| > 1 means the expansion is being pushed far outside its asymptotic range.
inline bool h_unreliable(double h) { return !(std::abs(h) <= 1.0); }

/// Chi-square distribution with k degrees of freedom.
double chi2_cdf(double x, int k);
double chi2_pdf(double x, int k);

/// Upper-alpha point: P(chi2_k > x) = alpha. Closed form -2 ln(alpha) for
/// k = 2; Newton iteration on the regularized incomplete gamma otherwise.
double chi2_quantile(double alpha, int k);

}  // namespace dta
