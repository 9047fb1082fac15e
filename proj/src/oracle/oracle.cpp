#include "dta/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dta/errors.hpp"
#include "dta/parallel.hpp"
#include "dta/random.hpp"

namespace dta::oracle {

namespace {

// Stream tags keep the B-moment and coverage draws of one seed unrelated.
constexpr std::uint64_t kObservationStream = 0x0b5e;

void validate(const OracleConfig& cfg) {
  if (cfg.n == 0) throw DomainError("oracle: n must be >= 1");
  if (cfg.within_vars.size() != cfg.n) {
    throw DomainError("oracle: within_vars has " + std::to_string(cfg.within_vars.size()) +
                      " entries, expected n = " + std::to_string(cfg.n));
  }
  if (!cfg.sigma_true.is_psd()) throw NotPositiveDefinite("oracle: sigma_true must be PSD");
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Fixed-order two-pass mean and standard error.
MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

Dataset design_dataset(const OracleConfig& cfg, std::span<const Vec2> y) {
  std::vector<Study> studies(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    studies[i].y_sens = y[i].x;
    studies[i].y_spec = y[i].y;
    studies[i].var_sens = cfg.within_vars[i].sens;
    studies[i].var_spec = cfg.within_vars[i].spec;
  }
  return Dataset(std::move(studies));
}

std::vector<Vec2> draw_observations(const OracleConfig& cfg, std::uint64_t rep) {
  Rng rng(stream_seed(cfg.seed, {kObservationStream, rep}));
  std::vector<Vec2> y(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const Sym2 cov = cfg.sigma_true + Sym2::diag(cfg.within_vars[i].sens, cfg.within_vars[i].spec);
    y[i] = rng.normal2({0.0, 0.0}, cov);
  }
  return y;
}

BMoments mc_b_moments(const OracleConfig& cfg, SigmaSource source) {
  validate(cfg);
  if (cfg.reps < 1000) throw DomainError("mc_b_moments: reps must be >= 1000");

  // V(Sigma) and its inverse depend on the design only.
  const Dataset design = design_dataset(cfg, std::vector<Vec2>(cfg.n));
  const Sym2 v_true = v_matrix(design, cfg.sigma_true);
  const Sym2 v_true_inv = v_true.inverse();

  std::vector<double> tr_sq(cfg.reps), tr_k2(cfg.reps), tr_k(cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
    const std::vector<Vec2> y = draw_observations(cfg, r);
    const Dataset d = design_dataset(cfg, y);
    const Sym2 sigma_hat = source == SigmaSource::estimate ? bias_corrected_sigma(d) : cfg.sigma_true;
    const Mat2 k = (v_matrix(d, sigma_hat) - v_true) * v_true_inv;
    const double t = k.trace();
    tr_sq[r] = t * t;
    tr_k2[r] = (k * k).trace();
    tr_k[r] = t;
  });

  const MeanSe m1 = mean_se(tr_sq);
  const MeanSe m2 = mean_se(tr_k2);
  const MeanSe m3 = mean_se(tr_k);
  return {{m1.mean, m2.mean, m3.mean}, {m1.se, m2.se, m3.se}, cfg.reps};
}

double expansion_coverage(const BTerms& b, double h, double x, int k) {
  if (!(x > 0.0)) throw DomainError("expansion_coverage: x must be > 0");
  if (k < 1) throw DomainError("expansion_coverage: k must be >= 1");
  double big_f = 0.0;
  double f_k = 0.0;
  double f_k2 = 0.0;
  double f_k4 = 0.0;
  if (k == 2) {
    const double e = std::exp(-0.5 * x);
    big_f = -std::expm1(-0.5 * x);
    f_k = 0.5 * e;
    f_k2 = x * e / 4.0;
    f_k4 = x * x * e / 16.0;
  } else {
    big_f = chi2_cdf(x, k);
    f_k = chi2_pdf(x, k);
    f_k2 = chi2_pdf(x, k + 2);
    f_k4 = chi2_pdf(x, k + 4);
  }
  return big_f + h * x * f_k + (b.b1 / 4.0 - b.b2 / 2.0 + 2.0 * b.b3) * f_k2 -
         (b.b1 / 4.0 + b.b2 / 2.0) * f_k4;
}

TrialOutcome coverage_trial(const Dataset& d, double alpha, const Vec2& beta_true, Estimator ncr_estimator) {
  TrialOutcome out;
  const FitResult moment = fit(d, Estimator::moment_bc, alpha);
  out.h = *moment.h;
  if (1.0 + out.h > 0.0) {
    out.ccr_covered = region_contains(confidence_region(moment, Method::ccr, alpha), beta_true);
  } else {
    out.ccr_defined = false;
  }
  const FitResult naive = ncr_estimator == Estimator::moment_bc ? moment : fit(d, ncr_estimator, alpha);
  out.ncr_covered = region_contains(confidence_region(naive, Method::ncr, alpha), beta_true);
  return out;
}

CoverageResult mc_coverage(const OracleConfig& cfg, Method method, double alpha, Estimator ncr_estimator) {
  validate(cfg);
  if (cfg.reps < 100) throw DomainError("mc_coverage: reps must be >= 100");
  if (cfg.n < 3) throw InsufficientStudies(cfg.n, 3);

  std::vector<char> covered(cfg.reps, 0);
  std::vector<char> defined(cfg.reps, 1);
  std::vector<double> hs(cfg.reps, 0.0);
  parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
    const std::vector<Vec2> y = draw_observations(cfg, r);
    const Dataset d = design_dataset(cfg, y);
    if (method == Method::ccr) {
      const FitResult f = fit(d, Estimator::moment_bc, alpha);
      hs[r] = *f.h;
      if (1.0 + hs[r] > 0.0) {
        covered[r] = region_contains(confidence_region(f, Method::ccr, alpha), {0.0, 0.0});
      } else {
        defined[r] = 0;
      }
    } else {
      covered[r] = region_contains(confidence_region(fit(d, ncr_estimator, alpha), Method::ncr, alpha),
                                   {0.0, 0.0});
    }
  });

  CoverageResult out;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    hits += covered[r] != 0;
    out.undefined += defined[r] == 0;
  }
  const double reps = static_cast<double>(cfg.reps);
  out.coverage = static_cast<double>(hits) / reps;
  out.se = std::sqrt(out.coverage * (1.0 - out.coverage) / reps);
  out.median_h = method == Method::ccr ? median(std::move(hs)) : 0.0;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace dta::oracle
