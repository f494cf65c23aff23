#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace orthopart {

struct NelderMeadOptions {
  std::size_t max_evals = 2000;
  double initial_step = 0.5;
  /// Stop as soon as a vertex reaches this value.
  double f_target = 0.0;
  /// Stop when the simplex diameter falls below this.
  double x_tol = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
  bool reached_target = false;
};

/// Downhill simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace orthopart
