#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "dta/simlab.hpp"
#include "support.hpp"

using namespace dta;
using namespace dta::simlab;

namespace {

std::vector<double> draw_many(std::size_t count, Truncation mode, std::uint64_t seed) {
  Rng rng(seed);
  const auto pairs = gen_within_variances(count / 2, rng, mode);
  std::vector<double> out;
  out.reserve(count);
  for (const auto& p : pairs) {
    out.push_back(p.sens);
    out.push_back(p.spec);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("within variances respect the truncation bounds") {
  for (Truncation mode : {Truncation::reject, Truncation::clip}) {
    for (double v : draw_many(100000, mode, 1)) {
      CHECK_MESSAGE(v >= kMinWithinVar, v);
      CHECK_MESSAGE(v <= kMaxWithinVar, v);
    }
  }
}

TEST_CASE("within variance means") {
  // Rejection keeps the conditional law, whose mean is well below 0.2.
  const double conditional = test::truncated_mean(kWithinScale, kMinWithinVar, kMaxWithinVar);
  CHECK(conditional == doctest::Approx(0.17323).epsilon(1e-4));
  CHECK(std::abs(mean_of(draw_many(1000000, Truncation::reject, 2)) - conditional) <= 0.001);
  // Clipping moves the tails onto the bounds and lands on 0.2.
  CHECK(std::abs(mean_of(draw_many(1000000, Truncation::clip, 3)) - 0.20) <= 0.002);
}

TEST_CASE("rejected draws follow the truncated scaled chi-square law") {
  std::vector<double> v = draw_many(100000, Truncation::reject, 4);
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = test::truncated_cdf(v[i], kWithinScale, kMinWithinVar, kMaxWithinVar);
    ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  CAPTURE(ks);
  CHECK(ks < 0.005);
  const double at = static_cast<double>(std::lower_bound(v.begin(), v.end(), 0.25) - v.begin()) / n;
  CHECK(std::abs(at - test::truncated_cdf(0.25, kWithinScale, kMinWithinVar, kMaxWithinVar)) < 0.005);
}

TEST_CASE("gen_dataset is deterministic per (seed, scenario, rep)") {
  const Scenario s{0.4, 0.4, 10, 1, 0.05, 42};
  const Dataset a = gen_dataset(s, 3, 1);
  const Dataset b = gen_dataset(s, 3, 1);
  const Dataset c = gen_dataset(s, 4, 1);
  const Dataset e = gen_dataset(s, 3, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].y_sens == b[i].y_sens);
    CHECK(a[i].var_spec == b[i].var_spec);
  }
  CHECK(a[0].y_sens != c[0].y_sens);
  CHECK(a[0].y_sens != e[0].y_sens);
}

namespace {

struct Moments {
  double var_a, var_b, cov, mean_s;
};

Moments pooled(const Scenario& s, std::size_t reps, Truncation mode) {
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0, ss = 0, cnt = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    for (const Study& st : gen_dataset(s, r, 0, mode)) {
      sa += st.y_sens;
      sb += st.y_spec;
      saa += st.y_sens * st.y_sens;
      sbb += st.y_spec * st.y_spec;
      sab += st.y_sens * st.y_spec;
      ss += st.var_sens;
      cnt += 1;
    }
  }
  const double ma = sa / cnt, mb = sb / cnt;
  return {saa / cnt - ma * ma, sbb / cnt - mb * mb, sab / cnt - ma * mb, ss / cnt};
}

}  // namespace

TEST_CASE("without heterogeneity the observations carry only within variance") {
  const Moments m = pooled({0.0, 0.0, 10, 1, 0.05, 5}, 10000, Truncation::reject);
  CHECK(std::abs(m.var_a - m.mean_s) <= 0.005);
  CHECK(std::abs(m.var_b - m.mean_s) <= 0.005);
  CHECK(std::abs(m.cov) <= 0.005);
}

TEST_CASE("pooled correlation is attenuated by the within variance") {
  const double es_reject = test::truncated_mean(kWithinScale, kMinWithinVar, kMaxWithinVar);
  const Moments r = pooled({0.8, 0.8, 10, 1, 0.05, 6}, 10000, Truncation::reject);
  CHECK(r.cov / std::sqrt(r.var_a * r.var_b) == doctest::Approx(0.64 / (0.8 + es_reject)).epsilon(0.015));

  const Moments c = pooled({0.8, 0.8, 10, 1, 0.05, 6}, 10000, Truncation::clip);
  CHECK(std::abs(c.cov / std::sqrt(c.var_a * c.var_b) - 0.64) <= 0.01);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(validate(Scenario{-0.1, 0.0, 8, 10, 0.05, 1}), DomainError);
  CHECK_THROWS_AS(validate(Scenario{0.1, 1.0, 8, 10, 0.05, 1}), DomainError);
  CHECK_THROWS_AS(validate(Scenario{0.1, 0.0, 2, 10, 0.05, 1}), DomainError);
  CHECK_THROWS_AS(validate(Scenario{0.1, 0.0, 8, 0, 0.05, 1}), DomainError);
  CHECK_THROWS_AS(validate(Scenario{0.1, 0.0, 8, 10, 1.0, 1}), DomainError);
  CHECK_THROWS_AS(run_grid(std::vector<Scenario>{}), DomainError);
}

TEST_CASE("grid runs are deterministic and thread independent") {
  const std::vector<double> tau2{0.2, 0.6};
  const std::vector<double> rho{0.4};
  const std::vector<std::size_t> ns{8, 12};
  const auto grid = make_grid(tau2, rho, ns, 150, 0.05, 11);
  REQUIRE(grid.size() == 4);
  CHECK(grid[1].tau2 == 0.2);
  CHECK(grid[1].n == 12);
  CHECK(grid[2].tau2 == 0.6);

  GridOptions one;
  one.threads = 1;
  GridOptions four;
  four.threads = 4;
  std::ostringstream a, b, c;
  write_grid_csv(a, run_grid(grid, one));
  write_grid_csv(b, run_grid(grid, one));
  write_grid_csv(c, run_grid(grid, four));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().rfind("tau2,rho,n,reps,alpha,coverage_ncr,coverage_ccr,median_h,mean_i2,mc_se\n", 0) == 0);
}

TEST_CASE("grid properties") {
  const std::vector<double> tau2{0.1, 0.4, 0.8};
  const std::vector<double> rho{0.4};
  const std::vector<std::size_t> ns{8, 16};
  const auto rows = run_grid(make_grid(tau2, rho, ns, 300, 0.05, 12));
  for (const GridRow& r : rows) {
    CAPTURE(r.scenario.tau2);
    CAPTURE(r.scenario.n);
    CHECK(r.coverage_ccr >= r.coverage_ncr - 2.0 * r.mc_se);
    CHECK(r.median_h >= 0.0);
    CHECK(r.mean_i2 >= 0.0);
    CHECK(r.mean_i2 < 1.0);
  }
  // rows: (0.1, 8), (0.1, 16), (0.4, 8), (0.4, 16), (0.8, 8), (0.8, 16)
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(rows[j].mean_i2 < rows[2 + j].mean_i2);
    CHECK(rows[2 + j].mean_i2 < rows[4 + j].mean_i2);
  }
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(rows[2 * t].mean_i2 < rows[2 * t + 1].mean_i2);
    CHECK(rows[2 * t].median_h > rows[2 * t + 1].median_h);
  }
}

TEST_CASE("a single replication yields 0/1 coverages") {
  const std::vector<Scenario> one{{0.3, 0.0, 8, 1, 0.05, 9}};
  const GridRow r = run_grid(one).front();
  CHECK((r.coverage_ncr == 0.0 || r.coverage_ncr == 1.0));
  CHECK((r.coverage_ccr == 0.0 || r.coverage_ccr == 1.0));
  CHECK(r.mc_se == 0.0);
}
