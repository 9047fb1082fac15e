#include <doctest.h>

#include <cmath>
#include <vector>

#include "dta/study.hpp"
#include "dta/summary.hpp"

using namespace dta;

TEST_CASE("i_squared") {
  const std::vector<double> equal(10, 0.2);
  CHECK(i_squared(equal, 0.8) == doctest::Approx(0.8));
  CHECK(i_squared(equal, 0.0) == 0.0);

  // Q = (n - 1) sum w / ((sum w)^2 - sum w^2) for weights 1, 2, 4.
  const std::vector<double> v{1.0, 0.5, 0.25};
  const double q = 2.0 * 7.0 / (49.0 - 21.0);
  CHECK(i_squared(v, 1.0) == doctest::Approx(1.0 / (q + 1.0)));
  CHECK_THROWS_AS(i_squared(v, -0.1), DomainError);
  CHECK_THROWS_AS(i_squared(std::vector<double>{0.2}, 0.1), InsufficientStudies);
}

TEST_CASE("mean I2 is concave in tau2") {
  // I2 = tau2 / (Q + tau2) is concave and zero at tau2 = 0, so for any
  // fixed draw of within variances I2(t) >= I2(2t) / 2; averages inherit it.
  const std::vector<double> v{0.02, 0.3, 0.11, 0.5, 0.07, 0.25, 0.6, 0.01};
  for (double t : {0.05, 0.1, 0.2, 0.4}) CHECK(i_squared(v, t) >= 0.5 * i_squared(v, 2.0 * t));
}

TEST_CASE("sroc_curve") {
  const std::vector<double> grid = default_fpr_grid();
  REQUIRE(grid.size() == 199);
  CHECK(grid.front() == doctest::Approx(0.005));
  CHECK(grid.back() == doctest::Approx(0.995));
  CHECK(grid[99] == doctest::Approx(0.5));

  const auto flat = sroc_curve({1.2, 0.4}, Sym2::diag(0.5, 0.3), grid);
  for (const RocPoint& p : flat) CHECK(p.sens == doctest::Approx(expit(1.2)));

  const Vec2 beta{0.8, 1.7};
  const Sym2 sig{0.4, 0.2, 0.6};
  const double t = 1.0 - expit(beta.y);
  const std::vector<double> at{t};
  CHECK(sroc_curve(beta, sig, at)[0].sens == doctest::Approx(expit(beta.x)));

  const std::vector<double> half{0.5};
  CHECK(sroc_curve({1.0, 1.0}, {0.5, 0.25, 0.5}, half)[0].sens == doctest::Approx(0.62246).epsilon(1e-5));
  CHECK(sroc_curve({1.0, 1.0}, {0.5, 0.25, 0.5}, half)[0].fpr == 0.5);
  CHECK(sroc_curve({1.0, 1.0}, Sym2::diag(0.5, 0.0), half)[0].sens == doctest::Approx(expit(1.0)));
}

TEST_CASE("ROC space mapping") {
  const RocPoint o = to_roc_space(Vec2{0.0, 0.0});
  CHECK(o.fpr == 0.5);
  CHECK(o.sens == 0.5);
  const RocPoint p = to_roc_space(Vec2{2.197224577, 2.197224577});
  CHECK(p.fpr == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(p.sens == doctest::Approx(0.9).epsilon(1e-9));

  for (const Vec2& v : {Vec2{-3.1, 0.2}, Vec2{0.7, 4.5}, Vec2{2.0, -2.0}}) {
    const Vec2 back = from_roc_space(to_roc_space(v));
    CHECK(std::abs(back.x - v.x) <= 1e-12);
    CHECK(std::abs(back.y - v.y) <= 1e-12);
  }
  const std::vector<Vec2> pts{{0, 0}, {1, 1}};
  CHECK(to_roc_space(pts).size() == 2);
}
