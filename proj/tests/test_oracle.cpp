#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dta/oracle.hpp"
#include "dta/random.hpp"
#include "dta/simlab.hpp"
#include "support.hpp"

using namespace dta;
using namespace dta::oracle;

namespace {

OracleConfig homogeneous(std::size_t n, std::size_t reps, std::uint64_t seed = 1, double s = 0.2) {
  OracleConfig cfg;
  cfg.n = n;
  cfg.sigma_true = Sym2::diag(0.4, 0.4);
  cfg.within_vars.assign(n, {s, s});
  cfg.reps = reps;
  cfg.seed = seed;
  return cfg;
}

// With every D_i equal, sigma_hat + S = c W with W ~ Wishart(n - 1, D) and
// c = (n + 1) / n^2, so K is similar to c A - I, A ~ Wishart(n - 1, I_2).
// tr A ~ chi2_{2(n-1)} and E[A^2] = m (m + 3) I give the exact moments below
// whenever the PSD projection never fires, which small S makes negligible.
struct Exact {
  double tr_sq, tr_k2, tr_k;
};

Exact exact_homogeneous(std::size_t n) {
  const double nn = static_cast<double>(n);
  const double c = (nn + 1.0) / (nn * nn);
  const double m = nn - 1.0;
  const double mean_tr = 2.0 * c * m - 2.0;
  return {4.0 * c * c * m + mean_tr * mean_tr, c * c * 2.0 * m * (m + 3.0) - 4.0 * c * m + 2.0, mean_tr};
}

}  // namespace

TEST_CASE("injecting the true sigma gives zero moments") {
  OracleConfig cfg = homogeneous(16, 1000);
  cfg.sigma_true = Sym2{};
  const BMoments m = mc_b_moments(cfg, SigmaSource::inject_truth);
  CHECK(m.mean.b1 == 0.0);
  CHECK(m.mean.b2 == 0.0);
  CHECK(m.mean.b3 == 0.0);
  CHECK(m.se.b1 == 0.0);
}

TEST_CASE("homogeneous moments match the exact Wishart values") {
  for (std::size_t n : {16u, 32u}) {
    CAPTURE(n);
    const BMoments m = mc_b_moments(homogeneous(n, 200000, 5, 0.05));
    const Exact e = exact_homogeneous(n);
    CHECK(std::abs(m.mean.b1 - e.tr_sq) <= 4.0 * m.se.b1);
    CHECK(std::abs(m.mean.b2 - e.tr_k2) <= 4.0 * m.se.b2);
    CHECK(std::abs(m.mean.b3 - e.tr_k) <= 4.0 * m.se.b3);
  }
  // The closed forms 4/n and 6/n are the leading terms of these values.
  const Exact e32 = exact_homogeneous(32);
  CHECK(e32.tr_sq == doctest::Approx(0.128785).epsilon(1e-5));
  CHECK(e32.tr_k2 == doctest::Approx(0.193165).epsilon(1e-5));
}

TEST_CASE("moments scale as 1/n") {
  const BMoments a = mc_b_moments(homogeneous(32, 100000, 7));
  const BMoments b = mc_b_moments(homogeneous(64, 100000, 7));
  CHECK(b.mean.b1 / a.mean.b1 == doctest::Approx(0.5).epsilon(0.06));
  CHECK(b.mean.b2 / a.mean.b2 == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("n times the closed-form discrepancy shrinks as n doubles") {
  double prev1 = 1e9, prev2 = 1e9;
  for (std::size_t n : {16u, 32u, 64u}) {
    const OracleConfig cfg = homogeneous(n, 200000, 9);
    const BMoments m = mc_b_moments(cfg);
    const BTerms b = b_star(design_dataset(cfg, std::vector<Vec2>(n)), cfg.sigma_true);
    const double d1 = static_cast<double>(n) * std::abs(m.mean.b1 - b.b1);
    const double d2 = static_cast<double>(n) * std::abs(m.mean.b2 - b.b2);
    CAPTURE(n);
    CAPTURE(d1);
    CAPTURE(d2);
    CHECK(d1 < prev1);
    CHECK(d2 < prev2);
    prev1 = d1;
    prev2 = d2;
  }
}

TEST_CASE("determinism and thread independence") {
  OracleConfig cfg = homogeneous(12, 5000, 3);
  cfg.threads = 1;
  const BMoments a = mc_b_moments(cfg);
  const BMoments b = mc_b_moments(cfg);
  cfg.threads = 4;
  const BMoments c = mc_b_moments(cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  CHECK(a.mean == c.mean);
  CHECK(a.se == c.se);
}

TEST_CASE("disjoint seeds agree within Monte Carlo error") {
  const BMoments a = mc_b_moments(homogeneous(12, 20000, 100));
  const BMoments b = mc_b_moments(homogeneous(12, 20000, 200));
  CHECK(a.mean.b1 != b.mean.b1);
  CHECK(std::abs(a.mean.b1 - b.mean.b1) <= 6.0 * std::hypot(a.se.b1, b.se.b1));
  CHECK(std::abs(a.mean.b2 - b.mean.b2) <= 6.0 * std::hypot(a.se.b2, b.se.b2));
  CHECK(std::abs(a.mean.b3 - b.mean.b3) <= 6.0 * std::hypot(a.se.b3, b.se.b3));
}

TEST_CASE("oracle configuration checks") {
  OracleConfig cfg = homogeneous(8, 999);
  CHECK_THROWS_AS(mc_b_moments(cfg), DomainError);
  cfg.reps = 1000;
  cfg.within_vars.pop_back();
  CHECK_THROWS_AS(mc_b_moments(cfg), DomainError);
  cfg = homogeneous(8, 99);
  CHECK_THROWS_AS(mc_coverage(cfg, Method::ncr, 0.05), DomainError);
}

TEST_CASE("expansion_coverage") {
  const double x = chi2_quantile(0.05, 2);
  CHECK(expansion_coverage({0, 0, 0}, 0.0, x, 2) == doctest::Approx(0.95).epsilon(1e-15));

  // Homogeneous n = 8 terms without correction: the naive region undercovers.
  const double e = std::exp(-0.5 * x);
  const double f4 = x * e / 4.0, f6 = x * x * e / 16.0;
  CHECK(f4 == doctest::Approx(0.074893).epsilon(1e-5));
  CHECK(f6 == doctest::Approx(0.112180).epsilon(1e-5));
  const double naive = expansion_coverage({0.5, 0.75, 0.0}, 0.0, x, 2);
  CHECK(naive == doctest::Approx(0.95 - 0.25 * f4 - 0.5 * f6).epsilon(1e-14));
  CHECK(naive == doctest::Approx(0.875187).epsilon(1e-5));

  std::mt19937_64 g(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k : {2, 4}) {
    const double xk = chi2_quantile(0.05, k);
    for (int rep = 0; rep < 100; ++rep) {
      const BTerms b{std::abs(u(g)), std::abs(u(g)), u(g)};
      CHECK(std::abs(expansion_coverage(b, h_adjust(b, k, xk), xk, k) - 0.95) <= 1e-12);
    }
  }
}

TEST_CASE("coverage at the edges and at the anchor scenario") {
  OracleConfig cfg;
  cfg.n = 8;
  cfg.sigma_true = {0.4, 0.16, 0.4};
  cfg.within_vars.assign(cfg.n, {0.2, 0.2});
  cfg.reps = 1000;
  cfg.seed = 42;

  CHECK(mc_coverage(cfg, Method::ncr, 1e-100).coverage == 1.0);

  const CoverageResult ncr = mc_coverage(cfg, Method::ncr, 0.05);
  const CoverageResult ccr = mc_coverage(cfg, Method::ccr, 0.05);
  CAPTURE(ncr.coverage);
  CAPTURE(ccr.coverage);
  CHECK(ncr.coverage < 0.93);
  CHECK(ccr.coverage >= 0.93);
  CHECK(ccr.coverage <= 0.98);
  CHECK(ccr.coverage >= ncr.coverage - 2.0 * ccr.se);
  CHECK(ccr.median_h > 0.0);
  CHECK(ncr.median_h == 0.0);
  CHECK(median({3.0, 1.0, 2.0, 10.0}) == 2.5);
}
