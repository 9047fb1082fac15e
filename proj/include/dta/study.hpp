#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dta/linalg.hpp"

namespace dta {

/// ln(p / (1 - p)); throws DomainError unless 0 < p < 1.
double logit(double p);
/// Inverse of logit, evaluated without overflow for large |x|.
double expit(double x);

/// One study's logit-scale summary. The within-study entries are variances
/// (not standard errors) and form the diagonal covariance S_i.
struct Study {
  std::string id;
  double y_sens = 0.0;    // logit sensitivity
  double y_spec = 0.0;    // logit specificity
  double var_sens = 0.0;  // within-study variance of y_sens
  double var_spec = 0.0;  // within-study variance of y_spec

  Vec2 y() const { return {y_sens, y_spec}; }
  Sym2 within() const { return Sym2::diag(var_sens, var_spec); }
};

/// 2x2 table of one study.
struct CellCounts {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
};

inline constexpr double kDefaultContinuityCorrection = 0.5;

/// Logit sensitivity / specificity and their delta-method variances. The
/// continuity correction is added to all four cells only when one of them is
/// zero.
Study summarize_counts(const CellCounts& counts, double cc = kDefaultContinuityCorrection,
                       std::string id = {});

/// Ordered collection of studies; the order fixes every summation order.
/// Construction rejects non-finite entries and negative variances. Strict
/// positivity of the variances is enforced at ingestion, not here, so that
/// zero-variance unit fixtures remain expressible.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Study> studies);

  std::size_t size() const { return studies_.size(); }
  bool empty() const { return studies_.empty(); }
  std::span<const Study> studies() const { return studies_; }
  const Study& operator[](std::size_t i) const { return studies_[i]; }
  auto begin() const { return studies_.begin(); }
  auto end() const { return studies_.end(); }

  /// Copy with every observation shifted by c.
  Dataset shifted(const Vec2& c) const;

 private:
  std::vector<Study> studies_;
};

}  // namespace dta
