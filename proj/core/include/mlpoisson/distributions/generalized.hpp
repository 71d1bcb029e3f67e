#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mlpoisson/distributions/types.hpp"
#include "mlpoisson/mittag_leffler.hpp"

namespace mlpoisson {

/// Generalized fractional Poisson distribution with its normalization
/// E_{alpha,beta}(lambda) evaluated once at construction.
///
/// Construction rejects parameterizations with a negative weight
/// lambda^k / Gamma(beta + alpha k) (possible only for beta <= 0) by
/// throwing InvalidDistribution. Instances are immutable, so concurrent
/// queries are safe.
class GeneralizedPoisson {
 public:
  explicit GeneralizedPoisson(const GfpdParams& params, const SeriesControl& ctl = {});

  const GfpdParams& params() const { return params_; }
  const SeriesControl& series_control() const { return ctl_; }

  /// ln E_{alpha,beta}(lambda).
  double log_normalization() const { return normalization_.log_abs(); }

  /// p_k; exactly 0 where beta + alpha k is a nonpositive integer.
  double pmf(std::size_t k) const;

  /// Table from k = 0 up to the first k whose accumulated mass reaches
  /// 1 - mass_tol, whose own probability is below mass_tol / 10 and which
  /// lies on the decreasing tail. mass_tol must lie in (0, 1e-3).
  PmfTable pmf_table(double mass_tol) const;

  /// Raw moments mu_0..mu_n (1 <= n <= 20) from
  ///   mu_m = sum_{k=1}^{m} S(m, k) lambda^k E^(k)(lambda) / E(lambda).
  MomentVector raw_moments(unsigned n) const;

  /// mean = lambda E'/E, variance = (lambda^2 E'' + lambda E')/E - mean^2.
  MeanVariance mean_variance() const;

 private:
  // lambda^k E^(k)(lambda) / E(lambda) for k = 0..n
  std::vector<double> factorial_moments(unsigned n) const;

  GfpdParams params_;
  SeriesControl ctl_;
  double log_lambda_;
  ScaledValue normalization_;
};

/// Outcome of scanning the weights of k = 0..k_max for negative values.
struct ValidityReport {
  bool valid = true;
  std::optional<std::size_t> first_negative_k;
};

ValidityReport gfpd_validity_check(const GfpdParams& p, std::size_t k_max);

/// Last index whose gamma argument beta + alpha k is not positive; the
/// scan 0..this index decides validity for the whole support.
std::size_t gfpd_sign_horizon(const GfpdParams& p);

double gfpd_pmf(const GfpdParams& p, std::size_t k, const SeriesControl& ctl = {});
PmfTable gfpd_pmf_table(const GfpdParams& p, double mass_tol, const SeriesControl& ctl = {});
MomentVector gfpd_raw_moments(const GfpdParams& p, unsigned n, const SeriesControl& ctl = {});
MeanVariance gfpd_mean_variance(const GfpdParams& p, const SeriesControl& ctl = {});

enum class LambdaRegime { small_lambda, large_lambda };

/// Limiting mean and variance.
///   small: mean = variance = Gamma(beta)/Gamma(alpha + beta) lambda
///   large: mean = (1 - beta + lambda^(1/alpha))/alpha,
///          variance = lambda^(1/alpha)/alpha^2   (needs 0 < alpha < 2)
MeanVariance gfpd_asymptotic_moments(const GfpdParams& p, LambdaRegime regime);

}  // namespace mlpoisson
