#include "dta/study.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dta/errors.hpp"

namespace dta {

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("logit: probability must lie in (0, 1), got " + std::to_string(p));
  }
  return std::log(p / (1.0 - p));
}

double expit(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Study summarize_counts(const CellCounts& c, double cc, std::string id) {
  if (c.tp < 0 || c.fn < 0 || c.fp < 0 || c.tn < 0) {
    throw DomainError("summarize_counts: negative cell count");
  }
  if (c.tp + c.fn < 1) throw DomainError("summarize_counts: no diseased subjects (tp + fn = 0)");
  if (c.fp + c.tn < 1) throw DomainError("summarize_counts: no healthy subjects (fp + tn = 0)");
  if (!(cc >= 0.0) || !std::isfinite(cc)) {
    throw DomainError("summarize_counts: continuity correction must be finite and >= 0");
  }

  const bool any_zero = c.tp == 0 || c.fn == 0 || c.fp == 0 || c.tn == 0;
  const double add = any_zero ? cc : 0.0;
  const double tp = static_cast<double>(c.tp) + add;
  const double fn = static_cast<double>(c.fn) + add;
  const double fp = static_cast<double>(c.fp) + add;
  const double tn = static_cast<double>(c.tn) + add;
  if (tp <= 0.0 || fn <= 0.0 || fp <= 0.0 || tn <= 0.0) {
    throw DomainError("summarize_counts: zero cell with zero continuity correction");
  }

  Study s;
  s.id = std::move(id);
  s.y_sens = std::log(tp / fn);
  s.y_spec = std::log(tn / fp);
  s.var_sens = 1.0 / tp + 1.0 / fn;
  s.var_spec = 1.0 / tn + 1.0 / fp;
  return s;
}

Dataset::Dataset(std::vector<Study> studies) : studies_(std::move(studies)) {
  for (std::size_t i = 0; i < studies_.size(); ++i) {
    const Study& s = studies_[i];
    if (!std::isfinite(s.y_sens) || !std::isfinite(s.y_spec)) {
      throw DomainError("study " + std::to_string(i) + ": non-finite observation");
    }
    if (!std::isfinite(s.var_sens) || !std::isfinite(s.var_spec) || s.var_sens < 0.0 ||
        s.var_spec < 0.0) {
      throw DomainError("study " + std::to_string(i) + ": within-study variance must be finite and >= 0");
    }
  }
}

Dataset Dataset::shifted(const Vec2& c) const {
  std::vector<Study> out = studies_;
  for (Study& s : out) {
    s.y_sens += c.x;
    s.y_spec += c.y;
  }
  return Dataset(std::move(out));
}

}  // namespace dta
