#pragma once

// Brute-force Monte Carlo counterparts of the closed-form correction terms.
// Used to check b_star and h_adjust, never by them.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dta/correction.hpp"
#include "dta/estimators.hpp"
#include "dta/linalg.hpp"
#include "dta/region.hpp"
#include "dta/study.hpp"

namespace dta::oracle {

struct WithinVar {
  double sens = 0.0;
  double spec = 0.0;
};

/// Frozen design: study count, true between-study covariance and the fixed
/// within-study variances. Observations are redrawn each replication.
struct OracleConfig {
  std::size_t n = 0;
  Sym2 sigma_true;
  std::vector<WithinVar> within_vars;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

/// Dataset with the design's variances and the given observations.
Dataset design_dataset(const OracleConfig& cfg, std::span<const Vec2> y);

/// Observations of replication `rep`: y_i ~ N(0, sigma_true + S_i), drawn
/// from the stream (seed, rep).
std::vector<Vec2> draw_observations(const OracleConfig& cfg, std::uint64_t rep);

enum class SigmaSource {
  estimate,      // bias-corrected moment estimator, as used by the corrected region
  inject_truth,  // Sigma_hat := sigma_true; K vanishes (test-only path)
};

struct BMoments {
  BTerms mean;
  BTerms se;  // standard errors of the three means
  std::size_t reps = 0;
};

/// Sample means of tr(K)^2, tr(K^2) and tr(K) with K = (V(Sigma_hat) - V(Sigma)) V(Sigma)^{-1}.
/// Requires reps >= 1000.
BMoments mc_b_moments(const OracleConfig& cfg, SigmaSource source = SigmaSource::estimate);

/// Coverage expansion F_k(x) + h x f_k(x) + (b1/4 - b2/2 + 2 b3) f_{k+2}(x)
/// - (b1/4 + b2/2) f_{k+4}(x), remainder dropped.
double expansion_coverage(const BTerms& b, double h, double x, int k);

/// Both regions evaluated on the same dataset.
struct TrialOutcome {
  bool ncr_covered = false;
  bool ccr_covered = false;
  bool ccr_defined = true;  // false when 1 + h <= 0; then ccr_covered is false
  double h = 0.0;
};

/// Builds the naive region (with `ncr_estimator`) and the corrected region
/// (always moment_bc) and checks whether each contains beta_true.
TrialOutcome coverage_trial(const Dataset& d, double alpha, const Vec2& beta_true,
                            Estimator ncr_estimator = Estimator::reml);

struct CoverageResult {
  double coverage = 0.0;
  double se = 0.0;
  double median_h = 0.0;  // 0 for ncr
  std::size_t undefined = 0;  // ccr replications with 1 + h <= 0
};

/// Fraction of replications whose region contains beta_true = 0. Requires
/// reps >= 100.
CoverageResult mc_coverage(const OracleConfig& cfg, Method method, double alpha,
                           Estimator ncr_estimator = Estimator::reml);

/// Median with the midpoint convention for even sizes; sorts a copy.
double median(std::vector<double> values);

}  // namespace dta::oracle
