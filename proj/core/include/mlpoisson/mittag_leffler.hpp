#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace mlpoisson {

/// Order/shift pair (alpha, beta) of the two-parameter Mittag-Leffler function
///   E_{alpha,beta}(x) = sum_{k>=0} x^k / Gamma(beta + alpha k).
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Truncation policy shared by every infinite-series evaluation.
///
/// A series stops once `consecutive_small` successive terms each satisfy
/// |term| <= rel_tol * |partial sum|; reaching `max_terms` first raises
/// NonConvergence. Terms that vanish at a gamma pole do not count towards
/// the consecutive run.
struct SeriesControl {
  double rel_tol = 1e-15;
  std::size_t max_terms = 1'000'000;
  std::size_t consecutive_small = 3;

  /// Throws InvalidParams unless 0 < rel_tol < 1, max_terms >= 10 and
  /// consecutive_small >= 1.
  void validate() const;
};

/// A real number stored as mantissa * exp(log_scale). Series for large
/// arguments are summed relative to their largest term, so values far
/// outside the double range remain usable in ratios.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
  int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }
};

enum class DerivativeMethod {
  /// Term-wise differentiated series sum_{k>=n} k!/(k-n)! x^(k-n) / Gamma(beta + alpha k).
  direct_series,
  /// n-fold application of
  ///   d/dx E_{a,b} = (1/a) E_{a,a+b-1} + ((1-b)/a) E_{a,a+b},
  /// collapsed to n+1 Mittag-Leffler evaluations.
  parameter_shift,
};

/// Highest derivative order accepted by ml_derivative.
inline constexpr unsigned kMaxDerivativeOrder = 20;

/// E_{alpha,beta}(x) in scaled form. Positive arguments are summed outward
/// from the dominant term; negative arguments fall back to MPFR arithmetic
/// when the alternating sum cancels.
ScaledValue ml_eval_scaled(const MLParams& p, double x, const SeriesControl& ctl = {});

/// E_{alpha,beta}(x). May overflow to +-inf where the scaled form does not.
double ml_eval(const MLParams& p, double x, const SeriesControl& ctl = {});

/// n-th derivative of E_{alpha,beta} at x, n <= kMaxDerivativeOrder.
ScaledValue ml_derivative_scaled(const MLParams& p, double x, unsigned n,
                                 const SeriesControl& ctl = {},
                                 DerivativeMethod method = DerivativeMethod::direct_series);

double ml_derivative(const MLParams& p, double x, unsigned n, const SeriesControl& ctl = {},
                     DerivativeMethod method = DerivativeMethod::direct_series);

/// x^k E^(k)_{alpha,beta}(x) for k = 0..n_max, as mantissa[k] * exp(log_scale)
/// with one scale shared by every order. Ratios between orders, which is
/// what the moment formulas need, are therefore free of scale rounding.
struct EulerDerivatives {
  std::vector<double> mantissa;
  double log_scale = 0.0;

  double value(unsigned k) const { return mantissa[k] * std::exp(log_scale); }
  /// x^k E^(k)(x) / E(x)
  double ratio(unsigned k) const { return mantissa[k] / mantissa[0]; }
};

/// Computes every order from a single pass over the weights
/// w_k = x^k / Gamma(beta + alpha k), using x^n E^(n)(x) = sum_k k!/(k-n)! w_k.
/// Requires x > 0 and n_max <= kMaxDerivativeOrder.
EulerDerivatives ml_euler_derivatives(const MLParams& p, double x, unsigned n_max,
                                      const SeriesControl& ctl = {});

/// Leading large-argument behaviour (1/alpha) x^((1-beta)/alpha) exp(x^(1/alpha)),
/// valid for 0 < alpha < 2.
struct AsymptoticValue {
  double log_value;
  double value;  ///< exp(log_value); +inf once it leaves the double range
};

AsymptoticValue ml_asymptotic(const MLParams& p, double x);

}  // namespace mlpoisson
