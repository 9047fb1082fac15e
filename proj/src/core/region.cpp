#include "dta/region.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dta/errors.hpp"

namespace dta {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ncr:
      return "ncr";
    case Method::ccr:
      return "ccr";
  }
  return "unknown";
}

FitResult fit(const Dataset& d, Estimator estimator, double alpha) {
  if (d.size() < 3) throw InsufficientStudies(d.size(), 3);
  FitResult out;
  out.estimator = estimator;
  if (estimator == Estimator::moment_bc) {
    const Sym2 raw = bias_corrected_sigma_raw(d);
    out.sigma = psd_projection(raw);
    out.projected = !(out.sigma == raw);
    out.b = b_star(d, out.sigma);
    out.h = h_adjust(*out.b, kOutcomeDim, chi2_quantile(alpha, kOutcomeDim));
  } else {
    const RemlFit r = reml_sigma(d);
    out.sigma = r.sigma;
    out.reml = r;
  }
  out.beta = gls_beta(d, out.sigma);
  out.v = v_matrix(d, out.sigma);
  return out;
}

ConfidenceRegion confidence_region(const FitResult& f, Method method, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("confidence_region: alpha must lie in (0, 1)");
  const double x = chi2_quantile(alpha, kOutcomeDim);
  ConfidenceRegion r{f.beta, f.v, x, 0.0, alpha, method};
  if (method == Method::ccr) {
    if (f.estimator != Estimator::moment_bc || !f.b) {
      throw DomainError("corrected region requires the bias-corrected moment estimator");
    }
    r.h = h_adjust(*f.b, kOutcomeDim, x);
    if (!(1.0 + r.h > 0.0)) throw RegionUndefined(r.h);
    r.threshold = x * (1.0 + r.h);
  }
  return r;
}

ConfidenceRegion confidence_region(const Dataset& d, Method method, double alpha, Estimator estimator) {
  if (method == Method::ccr && estimator == Estimator::reml) {
    throw DomainError("corrected region requires the bias-corrected moment estimator, not REML");
  }
  return confidence_region(fit(d, estimator, alpha), method, alpha);
}

double region_quadform(const ConfidenceRegion& r, const Vec2& p) {
  return r.shape.inverse_quadform(p - r.center);
}

bool region_contains(const ConfidenceRegion& r, const Vec2& beta0) {
  return region_quadform(r, beta0) <= r.threshold;
}

std::vector<Vec2> region_boundary(const ConfidenceRegion& r, int m) {
  if (m < 3) throw DomainError("region_boundary: need at least 3 points");
  const Lower2 l = r.shape.cholesky();
  const double radius = std::sqrt(r.threshold);
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    pts.push_back(r.center + radius * (l * Vec2{std::cos(t), std::sin(t)}));
  }
  return pts;
}

double region_area(const ConfidenceRegion& r) {
  return std::numbers::pi * r.threshold * std::sqrt(r.shape.det());
}

}  // namespace dta
