#pragma once

#include <cmath>
#include <cstddef>

#include "mlpoisson/combinatorics.hpp"

namespace mlpoisson {

/// Classical Poisson probability lambda^k e^(-lambda) / k!.
inline double poisson_pmf(double lambda, std::size_t k) {
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

/// Classical Poisson raw moment E[K^n] = B_n(lambda).
inline double poisson_raw_moment(unsigned n, double lambda) { return bell_polynomial(n, lambda); }

}  // namespace mlpoisson
