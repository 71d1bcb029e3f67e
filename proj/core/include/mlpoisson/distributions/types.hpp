#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace mlpoisson {

/// Generalized fractional Poisson distribution
///   p_k = lambda^k / (Gamma(beta + alpha k) E_{alpha,beta}(lambda)).
struct GfpdParams {
  double lambda = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Standard fractional Poisson distribution of order alpha_s in (0, 1] with
/// rate factor nu, evaluated at lambda.
struct SfpdParams {
  double alpha_s = 1.0;
  double nu = 1.0;
  double lambda = 1.0;
};

/// Truncated PMF: probs[k] for k = 0..k_max, with the mass not covered.
struct PmfTable {
  std::variant<GfpdParams, SfpdParams> params;
  std::size_t k_max = 0;
  std::vector<double> probs;
  double tail_mass_bound = 0.0;
};

struct MomentVector {
  std::vector<double> raw;  ///< raw[m] = E[K^m], raw[0] == 1
  double mean = 0.0;
  double variance = 0.0;

  unsigned order_max() const { return raw.empty() ? 0u : static_cast<unsigned>(raw.size() - 1); }
};

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

}  // namespace mlpoisson
