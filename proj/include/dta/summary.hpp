#pragma once

#include <span>
#include <vector>

#include "dta/linalg.hpp"

namespace dta {

/// Heterogeneity share tau2 / (Q + tau2), with Q the typical within-study
/// variance (n - 1) sum w / {(sum w)^2 - sum w^2}, w_i = 1 / within_vars_i.
double i_squared(std::span<const double> within_vars, double tau2);

struct RocPoint {
  double fpr = 0.0;
  double sens = 0.0;
};

/// Summary ROC curve implied by (beta, sigma): the conditional mean of logit
/// sensitivity given logit specificity, mapped to ROC space on the given
/// false-positive-rate grid. With no between-study variance in specificity the
/// slope is taken as zero and the curve is flat.
std::vector<RocPoint> sroc_curve(const Vec2& beta, const Sym2& sigma, std::span<const double> fpr_grid);

/// 199-point false positive rate grid 0.005, 0.010, ..., 0.995.
std::vector<double> default_fpr_grid();

/// Logit-scale (sens, spec) to ROC space (1 - expit(spec), expit(sens)).
RocPoint to_roc_space(const Vec2& p);
std::vector<RocPoint> to_roc_space(std::span<const Vec2> pts);
/// Inverse of to_roc_space.
Vec2 from_roc_space(const RocPoint& p);

}  // namespace dta
