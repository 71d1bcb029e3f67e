#pragma once

#include <cstddef>
#include <vector>

#include "mlpoisson/distributions/types.hpp"
#include "mlpoisson/mittag_leffler.hpp"

namespace mlpoisson {

/// Working precision, in decimal digits, at which the alternating series
/// starts. It doubles whenever the largest term exceeds the result by more
/// than 10^(digits - 5), at most kMaxPrecisionDoublings times.
inline constexpr unsigned kDefaultSfpdDigits = 34;
inline constexpr unsigned kMaxPrecisionDoublings = 4;

/// Throws InvalidParams unless 0 < alpha_s <= 1, nu > 0 and lambda > 0.
void validate(const SfpdParams& p);

/// Standard fractional Poisson probability
///   p_k = sum_{n>=0} C(k+n, k) (-1)^n z^(k+n) / Gamma(alpha_s (k+n) + 1),
///   z = nu lambda^alpha_s,
/// summed in MPFR arithmetic.
double sfpd_pmf(const SfpdParams& p, std::size_t k, const SeriesControl& ctl = {},
                unsigned precision_digits = kDefaultSfpdDigits);

/// p_k for k = k_lo..k_hi, sharing the 1/Gamma table between indices.
std::vector<double> sfpd_pmf_range(const SfpdParams& p, std::size_t k_lo, std::size_t k_hi,
                                   const SeriesControl& ctl = {},
                                   unsigned precision_digits = kDefaultSfpdDigits);

/// Same truncation rule as GeneralizedPoisson::pmf_table.
PmfTable sfpd_pmf_table(const SfpdParams& p, double mass_tol, const SeriesControl& ctl = {},
                        unsigned precision_digits = kDefaultSfpdDigits);

/// sqrt(pi) Gamma(1 + a) / (2^(2a - 1) Gamma(1/2 + a)); exactly 1 at a = 1.
double sfpd_variance_factor(double alpha_s);

/// Closed forms mean = nu lambda^a / Gamma(1 + a),
/// variance = mean + mean^2 (sfpd_variance_factor(a) - 1).
MeanVariance sfpd_mean_variance(const SfpdParams& p);

}  // namespace mlpoisson
