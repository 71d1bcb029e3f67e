#include "mlpoisson/distributions/generalized.hpp"

#include <cmath>
#include <string>

#include "mlpoisson/combinatorics.hpp"
#include "mlpoisson/errors.hpp"
#include "mlpoisson/gamma.hpp"
#include "mlpoisson/numeric/compensated_sum.hpp"

namespace mlpoisson {

namespace {

void check_params(const GfpdParams& p) {
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidParams("lambda must be positive and finite");
  }
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw InvalidParams("alpha must be positive and finite");
  }
  if (!std::isfinite(p.beta)) {
    throw InvalidParams("beta must be finite");
  }
}

void check_mass_tol(double mass_tol) {
  if (!(mass_tol > 0.0 && mass_tol < 1e-3)) {
    throw InvalidParams("mass_tol must lie in (0, 1e-3)");
  }
}

}  // namespace

std::size_t gfpd_sign_horizon(const GfpdParams& p) {
  if (p.beta > 0.0) {
    return 0;
  }
  return static_cast<std::size_t>(std::floor(-p.beta / p.alpha));
}

ValidityReport gfpd_validity_check(const GfpdParams& p, std::size_t k_max) {
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (reciprocal_gamma(p.beta + p.alpha * static_cast<double>(k)) < 0.0) {
      return {false, k};
    }
  }
  return {true, std::nullopt};
}

GeneralizedPoisson::GeneralizedPoisson(const GfpdParams& params, const SeriesControl& ctl)
    : params_(params), ctl_(ctl), log_lambda_(0.0) {
  check_params(params_);
  ctl_.validate();
  log_lambda_ = std::log(params_.lambda);
  // Past the horizon every gamma argument is positive, so this scan decides
  // validity for the entire support.
  const ValidityReport report = gfpd_validity_check(params_, gfpd_sign_horizon(params_));
  if (!report.valid) {
    throw InvalidDistribution("generalized fractional Poisson weights are negative at k = " +
                                  std::to_string(*report.first_negative_k) + " (alpha=" +
                                  std::to_string(params_.alpha) + ", beta=" +
                                  std::to_string(params_.beta) + ")",
                              *report.first_negative_k);
  }
  normalization_ = ml_eval_scaled({params_.alpha, params_.beta}, params_.lambda, ctl_);
  if (!(normalization_.mantissa > 0.0)) {
    throw NonConvergence("normalization E_{alpha,beta}(lambda) is not positive");
  }
}

double GeneralizedPoisson::pmf(std::size_t k) const {
  const double kd = static_cast<double>(k);
  const SignedLogGamma g = log_gamma(params_.beta + params_.alpha * kd);
  if (g.sign == 0) {
    return 0.0;
  }
  return std::exp(kd * log_lambda_ - g.log_abs - log_normalization());
}

PmfTable GeneralizedPoisson::pmf_table(double mass_tol) const {
  check_mass_tol(mass_tol);
  PmfTable table;
  table.params = params_;
  numeric::NeumaierSum mass;
  const std::size_t horizon = gfpd_sign_horizon(params_);
  double previous = 0.0;
  for (std::size_t k = 0;; ++k) {
    if (k >= ctl_.max_terms) {
      throw NonConvergence("PMF table did not reach the requested mass within " +
                           std::to_string(ctl_.max_terms) + " entries");
    }
    const double p = pmf(k);
    table.probs.push_back(p);
    mass.add(p);
    const bool on_tail = k > horizon && p <= previous;
    if (on_tail && mass.value() >= 1.0 - mass_tol && p < mass_tol / 10.0) {
      table.k_max = k;
      break;
    }
    previous = p;
  }
  table.tail_mass_bound = std::max(0.0, 1.0 - mass.value());
  return table;
}

std::vector<double> GeneralizedPoisson::factorial_moments(unsigned n) const {
  const EulerDerivatives f = ml_euler_derivatives({params_.alpha, params_.beta}, params_.lambda, n, ctl_);
  std::vector<double> out(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    out[k] = f.ratio(k);
  }
  return out;
}

MomentVector GeneralizedPoisson::raw_moments(unsigned n) const {
  if (n < 1 || n > kMaxDerivativeOrder) {
    throw InvalidParams("moment order must lie in 1.." + std::to_string(kMaxDerivativeOrder));
  }
  const std::vector<double> ratios = factorial_moments(n);
  const StirlingTable& stirling = StirlingTable::shared();
  MomentVector out;
  out.raw.assign(n + 1, 0.0);
  out.raw[0] = 1.0;
  for (unsigned m = 1; m <= n; ++m) {
    numeric::NeumaierSum sum;
    for (unsigned k = 1; k <= m; ++k) {
      sum.add(stirling(m, k).convert_to<double>() * ratios[k]);
    }
    out.raw[m] = sum.value();
  }
  out.mean = out.raw[1];
  if (n >= 2) {
    out.variance = out.raw[2] - out.mean * out.mean;
    if (out.variance < 0.0) {
      throw NonConvergence("computed variance is negative; the moment series did not converge");
    }
  }
  return out;
}

MeanVariance GeneralizedPoisson::mean_variance() const {
  const std::vector<double> ratios = factorial_moments(2);
  const double first = ratios[1];
  const double second = ratios[2];
  const double variance = second + first - first * first;
  if (variance < 0.0) {
    throw NonConvergence("computed variance is negative; the moment series did not converge");
  }
  return {first, variance};
}

double gfpd_pmf(const GfpdParams& p, std::size_t k, const SeriesControl& ctl) {
  return GeneralizedPoisson(p, ctl).pmf(k);
}

PmfTable gfpd_pmf_table(const GfpdParams& p, double mass_tol, const SeriesControl& ctl) {
  return GeneralizedPoisson(p, ctl).pmf_table(mass_tol);
}

MomentVector gfpd_raw_moments(const GfpdParams& p, unsigned n, const SeriesControl& ctl) {
  return GeneralizedPoisson(p, ctl).raw_moments(n);
}

MeanVariance gfpd_mean_variance(const GfpdParams& p, const SeriesControl& ctl) {
  return GeneralizedPoisson(p, ctl).mean_variance();
}

MeanVariance gfpd_asymptotic_moments(const GfpdParams& p, LambdaRegime regime) {
  check_params(p);
  if (regime == LambdaRegime::small_lambda) {
    // Gamma(beta) / Gamma(alpha + beta) = rgamma(alpha + beta) / rgamma(beta)
    const double rg_beta = reciprocal_gamma(p.beta);
    if (rg_beta == 0.0) {
      throw InvalidParams("small-lambda limit is undefined when beta is a gamma pole");
    }
    const double slope = reciprocal_gamma(p.alpha + p.beta) / rg_beta;
    return {slope * p.lambda, slope * p.lambda};
  }
  if (!(p.alpha < 2.0)) {
    throw InvalidParams("large-lambda limit requires 0 < alpha < 2");
  }
  const double root = std::pow(p.lambda, 1.0 / p.alpha);
  return {(1.0 - p.beta + root) / p.alpha, root / (p.alpha * p.alpha)};
}

}  // namespace mlpoisson
