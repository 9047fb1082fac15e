#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dta/correction.hpp"
#include "dta/estimators.hpp"
#include "dta/linalg.hpp"
#include "dta/study.hpp"

namespace dta {

/// Dimension of the summary mean; every formula below is evaluated with it.
inline constexpr int kOutcomeDim = 2;

enum class Method { ncr, ccr };

std::string_view to_string(Method m);

struct FitResult {
  Vec2 beta;    // GLS mean at sigma, logit scale
  Sym2 sigma;   // PSD between-study covariance estimate
  Sym2 v;       // V(sigma), PD
  Estimator estimator = Estimator::moment_bc;
  std::optional<double> h;  // only for moment_bc, at the alpha passed to fit()
  std::optional<BTerms> b;  // only for moment_bc
  bool projected = false;   // moment_bc: PSD projection changed the raw estimate
  std::optional<RemlFit> reml;  // only for reml
};

/// Estimates sigma with the chosen estimator and evaluates the GLS mean and
/// its covariance there. For moment_bc the correction terms are evaluated at
/// sigma and h is computed for the given alpha. Requires n >= 3.
FitResult fit(const Dataset& d, Estimator estimator, double alpha = 0.05);

struct ConfidenceRegion {
  Vec2 center;
  Sym2 shape;        // V(sigma_hat)
  double threshold;  // x (1 + h)
  double h = 0.0;    // 0 for ncr
  double alpha = 0.05;
  Method method = Method::ncr;
};

/// Region built from an existing fit. ccr requires a moment_bc fit; throws
/// RegionUndefined when 1 + h <= 0.
ConfidenceRegion confidence_region(const FitResult& fit, Method method, double alpha);

/// Fits and builds the region in one step; ccr with Estimator::reml is
/// rejected with DomainError since REML is not a function of OLS residuals.
ConfidenceRegion confidence_region(const Dataset& d, Method method, double alpha,
                                   Estimator estimator = Estimator::moment_bc);

/// (p - center)^t shape^{-1} (p - center).
double region_quadform(const ConfidenceRegion& r, const Vec2& p);

/// Boundary inclusive.
bool region_contains(const ConfidenceRegion& r, const Vec2& beta0);

/// m points center + sqrt(threshold) L (cos t_j, sin t_j), t_j = 2 pi j / m,
/// with L the lower Cholesky factor of shape.
std::vector<Vec2> region_boundary(const ConfidenceRegion& r, int m);

/// pi * threshold * sqrt(det shape).
double region_area(const ConfidenceRegion& r);

}  // namespace dta
