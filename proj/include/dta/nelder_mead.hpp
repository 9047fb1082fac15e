#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace dta {

/// Derivative-free simplex minimizer for a small fixed number of parameters.
template <std::size_t N>
struct NelderMeadOptions {
  std::array<double, N> initial_step{};
  /// Stop once the largest vertex distance from the best vertex is below this.
  double diameter_tol = 1e-8;
  int max_iterations = 500;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <std::size_t N>
NelderMeadResult<N> nelder_mead(const std::function<double(const std::array<double, N>&)>& f,
                                const std::array<double, N>& start,
                                const NelderMeadOptions<N>& opts);

extern template NelderMeadResult<3> nelder_mead<3>(
    const std::function<double(const std::array<double, 3>&)>&, const std::array<double, 3>&,
    const NelderMeadOptions<3>&);
extern template NelderMeadResult<2> nelder_mead<2>(
    const std::function<double(const std::array<double, 2>&)>&, const std::array<double, 2>&,
    const NelderMeadOptions<2>&);

}  // namespace dta
