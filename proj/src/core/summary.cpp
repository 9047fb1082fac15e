#include "dta/summary.hpp"

#include <cmath>
#include <string>

#include "dta/errors.hpp"
#include "dta/study.hpp"

namespace dta {

double i_squared(std::span<const double> within_vars, double tau2) {
  if (within_vars.size() < 2) throw InsufficientStudies(within_vars.size(), 2);
  if (!(tau2 >= 0.0) || !std::isfinite(tau2)) throw DomainError("i_squared: tau2 must be finite and >= 0");
  double sw = 0.0;
  double sw2 = 0.0;
  for (double v : within_vars) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("i_squared: within-study variances must be > 0");
    const double w = 1.0 / v;
    sw += w;
    sw2 += w * w;
  }
  const double n = static_cast<double>(within_vars.size());
  const double q = (n - 1.0) * sw / (sw * sw - sw2);
  return tau2 / (q + tau2);
}

std::vector<RocPoint> sroc_curve(const Vec2& beta, const Sym2& sigma, std::span<const double> fpr_grid) {
  if (!sigma.is_psd()) throw DomainError("sroc_curve: sigma must be PSD");
  const double slope = sigma.a22 > 0.0 ? sigma.a12 / sigma.a22 : 0.0;
  std::vector<RocPoint> out;
  out.reserve(fpr_grid.size());
  for (double t : fpr_grid) {
    const double mu_spec = -logit(t);
    out.push_back({t, expit(beta.x + slope * (mu_spec - beta.y))});
  }
  return out;
}

std::vector<double> default_fpr_grid() {
  std::vector<double> g;
  g.reserve(199);
  for (int i = 1; i <= 199; ++i) g.push_back(0.005 * i);
  return g;
}

RocPoint to_roc_space(const Vec2& p) { return {expit(-p.y), expit(p.x)}; }

std::vector<RocPoint> to_roc_space(std::span<const Vec2> pts) {
  std::vector<RocPoint> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.push_back(to_roc_space(p));
  return out;
}

Vec2 from_roc_space(const RocPoint& p) { return {logit(p.sens), -logit(p.fpr)}; }

}  // namespace dta
