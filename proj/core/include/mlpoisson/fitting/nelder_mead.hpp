#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mlpoisson {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Stop once every vertex lies within `tol` (max-norm) of the best one.
  double tol = 1e-6;
  std::size_t max_iter = 2000;
};

struct NelderMeadResult {
  std::vector<double> best;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Best objective value at the start of each iteration.
  std::vector<double> trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimization. The initial simplex is `start` plus one
/// vertex per coordinate, offset by `steps[i]` along axis i. Deterministic.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> start,
                             std::span<const double> steps, const NelderMeadOptions& opts = {});

}  // namespace mlpoisson
