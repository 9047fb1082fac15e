#pragma once

#include <string_view>

#include "dta/linalg.hpp"
#include "dta/study.hpp"

namespace dta {

enum class Estimator { moment_bc, reml };

std::string_view to_string(Estimator e);

/// Componentwise mean of the observations (the design is X_i = I).
Vec2 ols_beta(const Dataset& d);

/// Generalized least squares mean (sum D_i^{-1})^{-1} sum D_i^{-1} y_i with
/// D_i = sigma + S_i. Equals ols_beta exactly when every D_i coincides.
Vec2 gls_beta(const Dataset& d, const Sym2& sigma);

/// Covariance of the GLS mean, (sum D_i^{-1})^{-1}. Equals D / n exactly when
/// every D_i coincides.
Sym2 v_matrix(const Dataset& d, const Sym2& sigma);

/// Moment estimator (1/n) sum {r_i r_i^t - S_i} on OLS residuals r_i. May be
/// indefinite. Requires n >= 2.
Sym2 moment_sigma0(const Dataset& d);

/// Moment estimator with its O(1/n) bias removed, before any PSD projection:
/// Sigma0 + n^{-2} sum (Sigma0 + S_i). Requires n >= 2.
Sym2 bias_corrected_sigma_raw(const Dataset& d);

/// psd_projection(bias_corrected_sigma_raw(d)). Even, translation invariant and
/// a function of the OLS residuals only.
Sym2 bias_corrected_sigma(const Dataset& d);

/// Restricted log-likelihood (up to an additive constant) at sigma.
double restricted_loglik(const Dataset& d, const Sym2& sigma);

struct RemlOptions {
  double diameter_tol = 1e-8;
  int max_iterations = 500;
};

struct RemlFit {
  Sym2 sigma;
  double loglik = 0.0;
  int iterations = 0;
  /// False when the iteration cap was hit; sigma is then the best iterate.
  bool converged = false;
};

/// REML estimate of Sigma over PSD matrices, via simplex search on the
/// log-Cholesky parameters. Starts from the projected bias-corrected moment
/// estimate. Requires n >= 3; throws DegenerateDataset when all observations
/// coincide.
RemlFit reml_sigma(const Dataset& d, const RemlOptions& opts = {});

}  // namespace dta
