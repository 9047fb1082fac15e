#include "dta/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dta {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

template <std::size_t N>
NelderMeadResult<N> nelder_mead(const std::function<double(const std::array<double, N>&)>& f,
                                const std::array<double, N>& start,
                                const NelderMeadOptions<N>& opts) {
  using Point = std::array<double, N>;
  auto eval = [&f](const Point& p) {
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = start;
    pts[i + 1][i] += opts.initial_step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = eval(pts[i]);

  std::array<std::size_t, N + 1> order;
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::array<Point, N + 1> p2;
    std::array<double, N + 1> v2;
    for (std::size_t i = 0; i <= N; ++i) {
      p2[i] = pts[order[i]];
      v2[i] = vals[order[i]];
    }
    pts = p2;
    vals = v2;
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += (pts[i][j] - pts[0][j]) * (pts[i][j] - pts[0][j]);
      d = std::max(d, std::sqrt(s));
    }
    return d;
  };
  auto along = [](const Point& from, const Point& to, double t) {
    Point p;
    for (std::size_t j = 0; j < N; ++j) p[j] = from[j] + t * (to[j] - from[j]);
    return p;
  };

  NelderMeadResult<N> out;
  sort_vertices();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (diameter() < opts.diameter_tol) {
      out.converged = true;
      break;
    }
    Point centroid{};
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) centroid[j] += pts[i][j] / static_cast<double>(N);
    }
    const Point& worst = pts[N];

    const Point reflected = along(centroid, worst, -kReflect);
    const double fr = eval(reflected);
    if (fr < vals[0]) {
      const Point expanded = along(centroid, worst, -kExpand);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[N] = expanded;
        vals[N] = fe;
      } else {
        pts[N] = reflected;
        vals[N] = fr;
      }
    } else if (fr < vals[N - 1]) {
      pts[N] = reflected;
      vals[N] = fr;
    } else {
      // Outside contraction when the reflection improved on the worst vertex,
      // inside contraction otherwise.
      const bool outside = fr < vals[N];
      const Point contracted =
          outside ? along(centroid, reflected, kContract) : along(centroid, worst, kContract);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : vals[N])) {
        pts[N] = contracted;
        vals[N] = fc;
      } else {
        for (std::size_t i = 1; i <= N; ++i) {
          pts[i] = along(pts[0], pts[i], kShrink);
          vals[i] = eval(pts[i]);
        }
      }
    }
    sort_vertices();
  }
  if (!out.converged && diameter() < opts.diameter_tol) out.converged = true;

  out.x = pts[0];
  out.value = vals[0];
  out.iterations = it;
  return out;
}

template NelderMeadResult<3> nelder_mead<3>(const std::function<double(const std::array<double, 3>&)>&,
                                            const std::array<double, 3>&, const NelderMeadOptions<3>&);
template NelderMeadResult<2> nelder_mead<2>(const std::function<double(const std::array<double, 2>&)>&,
                                            const std::array<double, 2>&, const NelderMeadOptions<2>&);

}  // namespace dta
