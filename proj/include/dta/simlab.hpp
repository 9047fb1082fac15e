#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "dta/estimators.hpp"
#include "dta/oracle.hpp"
#include "dta/random.hpp"
#include "dta/study.hpp"

namespace dta::simlab {

/// One cell of the simulation grid. Sigma = tau2 [[1, rho], [rho, 1]], beta = 0.
struct Scenario {
  double tau2 = 0.0;
  double rho = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;

  Sym2 sigma() const { return {tau2, tau2 * rho, tau2}; }
};

/// Throws DomainError on tau2 < 0, |rho| >= 1, n < 3, reps < 1 or alpha outside (0, 1).
void validate(const Scenario& s);

/// How draws of 0.25 chi2_1 are confined to [kMinWithinVar, kMaxWithinVar].
enum class Truncation {
  reject,  // redraw until inside; the conditional law of 0.25 chi2_1
  clip,    // clamp to the nearest bound; puts point masses at both ends
};

std::string_view to_string(Truncation t);

inline constexpr double kWithinScale = 0.25;
inline constexpr double kMinWithinVar = 0.009;
inline constexpr double kMaxWithinVar = 0.6;
inline constexpr int kMaxRejections = 10000;

/// Independent (sens, spec) within-study variance pairs. Rejection gives up
/// with an Error after kMaxRejections attempts for a single draw.
std::vector<oracle::WithinVar> gen_within_variances(std::size_t n, Rng& rng,
                                                    Truncation mode = Truncation::reject);

/// Replication `rep` of scenario number `scenario_index`: fresh within-study
/// variances, then y_i ~ N(0, Sigma + S_i). Deterministic in (seed,
/// scenario_index, rep).
Dataset gen_dataset(const Scenario& s, std::uint64_t rep, std::uint64_t scenario_index = 0,
                    Truncation mode = Truncation::reject);

struct GridOptions {
  Truncation truncation = Truncation::reject;
  /// Estimator behind the naive region; the corrected region always uses moment_bc.
  Estimator ncr_estimator = Estimator::reml;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct GridRow {
  Scenario scenario;
  double coverage_ncr = 0.0;
  double coverage_ccr = 0.0;
  double median_h = 0.0;
  double mean_i2 = 0.0;
  /// sqrt(p (1 - p) / reps), taken at whichever coverage gives the larger value.
  double mc_se = 0.0;
  std::size_t ccr_undefined = 0;
};

std::vector<GridRow> run_grid(std::span<const Scenario> scenarios, const GridOptions& opts = {});

/// Full cartesian grid in tau2-major, then rho, then n order.
std::vector<Scenario> make_grid(std::span<const double> tau2s, std::span<const double> rhos,
                                std::span<const std::size_t> ns, std::size_t reps, double alpha,
                                std::uint64_t seed);

/// Header `tau2,rho,n,reps,alpha,coverage_ncr,coverage_ccr,median_h,mean_i2,mc_se`
/// then one row per scenario, floats with 6 significant digits.
void write_grid_csv(std::ostream& os, std::span<const GridRow> rows);

}  // namespace dta::simlab
