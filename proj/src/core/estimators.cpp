#include "dta/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dta/errors.hpp"
#include "dta/nelder_mead.hpp"

namespace dta {

namespace {

void require_studies(const Dataset& d, std::size_t need) {
  if (d.size() < need) throw InsufficientStudies(d.size(), need);
}

bool within_all_equal(const Dataset& d) {
  const Study& first = d[0];
  return std::all_of(d.begin(), d.end(), [&](const Study& s) {
    return s.var_sens == first.var_sens && s.var_spec == first.var_spec;
  });
}

Sym2 total_precision(const Dataset& d, const Sym2& sigma) {
  Sym2 p;
  for (const Study& s : d) p += (sigma + s.within()).inverse();
  return p;
}

double mean_within_variance(const Dataset& d) {
  double sum = 0.0;
  for (const Study& s : d) sum += 0.5 * (s.var_sens + s.var_spec);
  return sum / static_cast<double>(d.size());
}

// Map log-Cholesky parameters to Sigma = L L^t. Log-diagonal entries below
// `floor` are clamped, which keeps boundary fits (Sigma near singular) finite.
Sym2 from_log_cholesky(const std::array<double, 3>& t, double floor) {
  const double l11 = std::exp(std::max(t[0], floor));
  const double l21 = t[1];
  const double l22 = std::exp(std::max(t[2], floor));
  return {l11 * l11, l11 * l21, l21 * l21 + l22 * l22};
}

}  // namespace

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::moment_bc:
      return "moment_bc";
    case Estimator::reml:
      return "reml";
  }
  return "unknown";
}

Vec2 ols_beta(const Dataset& d) {
  require_studies(d, 1);
  Vec2 sum;
  for (const Study& s : d) sum += s.y();
  return sum * (1.0 / static_cast<double>(d.size()));
}

Vec2 gls_beta(const Dataset& d, const Sym2& sigma) {
  require_studies(d, 1);
  if (within_all_equal(d)) {
    // Equal weights: validate invertibility, then the GLS mean is the OLS mean.
    (void)(sigma + d[0].within()).inverse();
    return ols_beta(d);
  }
  Sym2 precision;
  Vec2 weighted;
  for (const Study& s : d) {
    const Sym2 w = (sigma + s.within()).inverse();
    precision += w;
    weighted += w * s.y();
  }
  return precision.inverse() * weighted;
}

Sym2 v_matrix(const Dataset& d, const Sym2& sigma) {
  require_studies(d, 1);
  if (within_all_equal(d)) {
    const Sym2 dm = sigma + d[0].within();
    (void)dm.inverse();
    const double n = static_cast<double>(d.size());
    return {dm.a11 / n, dm.a12 / n, dm.a22 / n};
  }
  return total_precision(d, sigma).inverse();
}

Sym2 moment_sigma0(const Dataset& d) {
  require_studies(d, 2);
  const Vec2 mean = ols_beta(d);
  Sym2 acc;
  for (const Study& s : d) {
    acc += Sym2::outer(s.y() - mean);
    acc -= s.within();
  }
  return acc * (1.0 / static_cast<double>(d.size()));
}

Sym2 bias_corrected_sigma_raw(const Dataset& d) {
  require_studies(d, 2);
  const Sym2 s0 = moment_sigma0(d);
  const double n = static_cast<double>(d.size());
  Sym2 bias_sum;
  for (const Study& s : d) bias_sum += s0 + s.within();
  return s0 + bias_sum * (1.0 / (n * n));
}

Sym2 bias_corrected_sigma(const Dataset& d) { return psd_projection(bias_corrected_sigma_raw(d)); }

double restricted_loglik(const Dataset& d, const Sym2& sigma) {
  require_studies(d, 1);
  const Vec2 beta = gls_beta(d, sigma);
  double ll = 0.0;
  Sym2 precision;
  for (const Study& s : d) {
    const Sym2 di = sigma + s.within();
    const Sym2 inv = di.inverse();
    precision += inv;
    const double ld = di.det();
    if (!(ld > 0.0)) throw NotPositiveDefinite("restricted_loglik: D_i not positive definite");
    ll += std::log(ld) + inv.quadform(s.y() - beta);
  }
  const double pd = precision.det();
  if (!(pd > 0.0)) throw NotPositiveDefinite("restricted_loglik: total precision not positive definite");
  return -0.5 * ll - 0.5 * std::log(pd);
}

RemlFit reml_sigma(const Dataset& d, const RemlOptions& opts) {
  require_studies(d, 3);
  const Study& first = d[0];
  const bool degenerate = std::all_of(d.begin(), d.end(), [&](const Study& s) {
    return s.y_sens == first.y_sens && s.y_spec == first.y_spec;
  });
  if (degenerate) throw DegenerateDataset("reml_sigma: all observations are identical");

  const double scale = std::max(mean_within_variance(d), 1e-8);
  const double floor = std::log(1e-5 * std::sqrt(scale));

  // Ridge keeps the log-Cholesky start finite when the moment estimate is
  // singular.
  const Sym2 start_sigma = bias_corrected_sigma(d) + Sym2::identity() * (1e-2 * scale);
  const Lower2 l = start_sigma.cholesky();
  const std::array<double, 3> start{std::log(l.l11), l.l21, std::log(l.l22)};

  auto objective = [&](const std::array<double, 3>& t) {
    try {
      return -restricted_loglik(d, from_log_cholesky(t, floor));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  NelderMeadOptions<3> nm;
  nm.initial_step = {0.5, 0.5 * std::max(std::sqrt(start_sigma.a22), 0.1), 0.5};
  nm.diameter_tol = opts.diameter_tol;
  nm.max_iterations = opts.max_iterations;

  NelderMeadResult<3> best = nelder_mead<3>(objective, start, nm);
  int iterations = best.iterations;
  if (best.converged) {
    // One restart from the optimum guards against a prematurely collapsed simplex.
    NelderMeadResult<3> again = nelder_mead<3>(objective, best.x, nm);
    iterations += again.iterations;
    if (again.value <= best.value) best = again;
  }

  RemlFit fit;
  fit.sigma = from_log_cholesky(best.x, floor);
  fit.loglik = -best.value;
  fit.iterations = iterations;
  fit.converged = best.converged;
  return fit;
}

}  // namespace dta
