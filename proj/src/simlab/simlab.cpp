#include "dta/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dta/errors.hpp"
#include "dta/parallel.hpp"
#include "dta/summary.hpp"

namespace dta::simlab {

namespace {

double draw_within(Rng& rng, Truncation mode) {
  if (mode == Truncation::clip) {
    const double z = rng.normal();
    return std::clamp(kWithinScale * z * z, kMinWithinVar, kMaxWithinVar);
  }
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double z = rng.normal();
    const double v = kWithinScale * z * z;
    if (v >= kMinWithinVar && v <= kMaxWithinVar) return v;
  }
  throw Error("gen_within_variances: rejection sampler exceeded " + std::to_string(kMaxRejections) +
              " attempts");
}

std::string g6(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

void validate(const Scenario& s) {
  if (!(s.tau2 >= 0.0) || !std::isfinite(s.tau2)) throw DomainError("scenario: tau2 must be >= 0");
  if (!(s.rho > -1.0 && s.rho < 1.0)) throw DomainError("scenario: rho must lie in (-1, 1)");
  if (s.n < 3) throw DomainError("scenario: n must be >= 3");
  if (s.reps < 1) throw DomainError("scenario: reps must be >= 1");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw DomainError("scenario: alpha must lie in (0, 1)");
}

std::string_view to_string(Truncation t) {
  switch (t) {
    case Truncation::reject:
      return "reject";
    case Truncation::clip:
      return "clip";
  }
  return "unknown";
}

std::vector<oracle::WithinVar> gen_within_variances(std::size_t n, Rng& rng, Truncation mode) {
  std::vector<oracle::WithinVar> out(n);
  for (oracle::WithinVar& w : out) {
    w.sens = draw_within(rng, mode);
    w.spec = draw_within(rng, mode);
  }
  return out;
}

Dataset gen_dataset(const Scenario& s, std::uint64_t rep, std::uint64_t scenario_index, Truncation mode) {
  Rng rng(stream_seed(s.seed, {scenario_index, rep}));
  const std::vector<oracle::WithinVar> within = gen_within_variances(s.n, rng, mode);
  const Sym2 sigma = s.sigma();
  std::vector<Study> studies(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    const Sym2 cov = sigma + Sym2::diag(within[i].sens, within[i].spec);
    const Vec2 y = rng.normal2({0.0, 0.0}, cov);
    studies[i] = {std::string{}, y.x, y.y, within[i].sens, within[i].spec};
  }
  return Dataset(std::move(studies));
}

std::vector<GridRow> run_grid(std::span<const Scenario> scenarios, const GridOptions& opts) {
  if (scenarios.empty()) throw DomainError("run_grid: empty scenario grid");
  for (const Scenario& s : scenarios) validate(s);

  std::vector<GridRow> rows;
  rows.reserve(scenarios.size());
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    const Scenario& s = scenarios[si];
    std::vector<oracle::TrialOutcome> trials(s.reps);
    std::vector<double> i2(s.reps);
    parallel_for(s.reps, opts.threads, [&](std::size_t r) {
      const Dataset d = gen_dataset(s, r, si, opts.truncation);
      trials[r] = oracle::coverage_trial(d, s.alpha, {0.0, 0.0}, opts.ncr_estimator);
      std::vector<double> vs(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) vs[i] = d[i].var_sens;
      i2[r] = i_squared(vs, s.tau2);
    });

    GridRow row;
    row.scenario = s;
    std::size_t ncr_hits = 0;
    std::size_t ccr_hits = 0;
    double i2_sum = 0.0;
    std::vector<double> hs(s.reps);
    for (std::size_t r = 0; r < s.reps; ++r) {
      ncr_hits += trials[r].ncr_covered;
      ccr_hits += trials[r].ccr_covered;
      row.ccr_undefined += !trials[r].ccr_defined;
      hs[r] = trials[r].h;
      i2_sum += i2[r];
    }
    const double reps = static_cast<double>(s.reps);
    row.coverage_ncr = static_cast<double>(ncr_hits) / reps;
    row.coverage_ccr = static_cast<double>(ccr_hits) / reps;
    row.median_h = oracle::median(std::move(hs));
    row.mean_i2 = i2_sum / reps;
    const double se_ncr = std::sqrt(row.coverage_ncr * (1.0 - row.coverage_ncr) / reps);
    const double se_ccr = std::sqrt(row.coverage_ccr * (1.0 - row.coverage_ccr) / reps);
    row.mc_se = std::max(se_ncr, se_ccr);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Scenario> make_grid(std::span<const double> tau2s, std::span<const double> rhos,
                                std::span<const std::size_t> ns, std::size_t reps, double alpha,
                                std::uint64_t seed) {
  std::vector<Scenario> grid;
  grid.reserve(tau2s.size() * rhos.size() * ns.size());
  for (double t : tau2s)
    for (double r : rhos)
      for (std::size_t n : ns) grid.push_back({t, r, n, reps, alpha, seed});
  return grid;
}

void write_grid_csv(std::ostream& os, std::span<const GridRow> rows) {
  os << "tau2,rho,n,reps,alpha,coverage_ncr,coverage_ccr,median_h,mean_i2,mc_se\n";
  for (const GridRow& r : rows) {
    const Scenario& s = r.scenario;
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", g6(s.tau2), g6(s.rho), s.n, s.reps, g6(s.alpha),
               g6(r.coverage_ncr), g6(r.coverage_ccr), g6(r.median_h), g6(r.mean_i2), g6(r.mc_se));
  }
}

}  // namespace dta::simlab
