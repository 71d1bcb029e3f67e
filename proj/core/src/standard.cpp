#include "mlpoisson/distributions/standard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "mlpoisson/errors.hpp"
#include "mlpoisson/gamma.hpp"
#include "mlpoisson/numeric/big_float.hpp"
#include "mlpoisson/numeric/compensated_sum.hpp"

namespace mlpoisson {

namespace {

using numeric::BigFloat;

constexpr double kLn10 = 2.302585092994045684;

// Decimal digits that must survive cancellation for a full double result.
constexpr double kRetainedDigits = 20.0;

// Terms z^m / Gamma(alpha m + 1) of the one-parameter Mittag-Leffler
// series, shared by every k at one working precision.
class StandardSeries {
 public:
  StandardSeries(const SfpdParams& p, unsigned digits)
      : alpha_(p.alpha_s), digits_(digits), bits_(numeric::bits_for_digits(digits)),
        log_z_(bits_) {
    // ln z = ln nu + alpha ln lambda
    const BigFloat lambda(p.lambda, bits_);
    const BigFloat nu(p.nu, bits_);
    log_z_ = log(nu) + BigFloat(alpha_, bits_) * log(lambda);
  }

  // Evaluates p_k; nullopt when cancellation used up the working precision.
  std::optional<double> pmf(std::size_t k, const SeriesControl& ctl) {
    BigFloat sum(bits_);
    BigFloat term(bits_);
    BigFloat binom(1.0, bits_);  // C(m, k)
    double max_log_term = -HUGE_VAL;
    double prev_log_term = HUGE_VAL;
    std::size_t run = 0;
    bool converged = false;
    for (std::size_t n = 0; n < ctl.max_terms; ++n) {
      const std::size_t m = k + n;
      if (n > 0) {
        binom *= static_cast<unsigned long>(m);
        binom /= static_cast<unsigned long>(n);
      }
      term = binom;
      term *= weight(m);
      if (n % 2 == 1) {
        sum -= term;
      } else {
        sum += term;
      }
      const double log_term = term.log_abs();
      max_log_term = std::max(max_log_term, log_term);
      const double log_sum = sum.log_abs();
      const bool falling = log_term < prev_log_term;
      prev_log_term = log_term;
      if (n > 0 && falling && !sum.is_zero() && log_term <= log_sum + std::log(ctl.rel_tol)) {
        ++run;
      } else {
        run = 0;
      }
      if (run >= ctl.consecutive_small) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NonConvergence("standard fractional Poisson series for k = " + std::to_string(k) +
                           " did not converge within " + std::to_string(ctl.max_terms) +
                           " terms");
    }
    if (sum.is_zero()) {
      return std::nullopt;
    }
    const double lost_digits = (max_log_term - sum.log_abs()) / kLn10;
    if (lost_digits > static_cast<double>(digits_) - kRetainedDigits) {
      return std::nullopt;
    }
    return sum.to_double();
  }

 private:
  const BigFloat& weight(std::size_t m) {
    while (weights_.size() <= m) {
      const std::size_t j = weights_.size();
      BigFloat arg(alpha_, bits_);
      arg *= static_cast<unsigned long>(j);
      arg += BigFloat(1.0, bits_);
      int sign = 0;
      BigFloat log_w = log_abs_gamma(arg, sign);
      log_w = -log_w;
      BigFloat jz(log_z_);
      jz *= static_cast<unsigned long>(j);
      log_w += jz;
      weights_.push_back(exp(log_w));
    }
    return weights_[m];
  }

  double alpha_;
  unsigned digits_;
  unsigned long bits_;
  BigFloat log_z_;
  std::vector<BigFloat> weights_;
};

double checked_probability(double p, std::size_t k) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
    throw NonConvergence("standard fractional Poisson p_" + std::to_string(k) +
                         " evaluated outside [0, 1]: " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

void validate(const SfpdParams& p) {
  if (!(p.alpha_s > 0.0 && p.alpha_s <= 1.0)) {
    throw InvalidParams("standard fractional Poisson order must lie in (0, 1], got " +
                        std::to_string(p.alpha_s));
  }
  if (!(p.nu > 0.0) || !std::isfinite(p.nu)) {
    throw InvalidParams("nu must be positive and finite");
  }
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidParams("lambda must be positive and finite");
  }
}

std::vector<double> sfpd_pmf_range(const SfpdParams& p, std::size_t k_lo, std::size_t k_hi,
                                   const SeriesControl& ctl, unsigned precision_digits) {
  validate(p);
  ctl.validate();
  if (precision_digits < 15) {
    throw InvalidParams("precision_digits must be at least 15");
  }
  if (k_hi < k_lo) {
    throw InvalidParams("empty k range");
  }
  std::vector<std::optional<double>> values(k_hi - k_lo + 1);
  unsigned digits = std::max(kDefaultSfpdDigits, precision_digits);
  for (unsigned doubling = 0;; ++doubling) {
    StandardSeries series(p, digits);
    bool complete = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i]) {
        values[i] = series.pmf(k_lo + i, ctl);
        complete = complete && values[i].has_value();
      }
    }
    if (complete) {
      break;
    }
    if (doubling == kMaxPrecisionDoublings) {
      throw PrecisionExhausted("standard fractional Poisson series still cancels at " +
                               std::to_string(digits) + " digits (alpha_s=" +
                               std::to_string(p.alpha_s) + ")");
    }
    digits *= 2;
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = checked_probability(*values[i], k_lo + i);
  }
  return out;
}

double sfpd_pmf(const SfpdParams& p, std::size_t k, const SeriesControl& ctl,
                unsigned precision_digits) {
  return sfpd_pmf_range(p, k, k, ctl, precision_digits).front();
}

PmfTable sfpd_pmf_table(const SfpdParams& p, double mass_tol, const SeriesControl& ctl,
                        unsigned precision_digits) {
  if (!(mass_tol > 0.0 && mass_tol < 1e-3)) {
    throw InvalidParams("mass_tol must lie in (0, 1e-3)");
  }
  constexpr std::size_t kBlock = 16;
  PmfTable table;
  table.params = p;
  numeric::NeumaierSum mass;
  double previous = 0.0;
  for (std::size_t k_lo = 0;; k_lo += kBlock) {
    if (k_lo >= ctl.max_terms) {
      throw NonConvergence("PMF table did not reach the requested mass");
    }
    const auto block = sfpd_pmf_range(p, k_lo, k_lo + kBlock - 1, ctl, precision_digits);
    for (std::size_t i = 0; i < block.size(); ++i) {
      const double q = block[i];
      table.probs.push_back(q);
      mass.add(q);
      if (k_lo + i > 0 && q <= previous && mass.value() >= 1.0 - mass_tol &&
          q < mass_tol / 10.0) {
        table.k_max = k_lo + i;
        table.tail_mass_bound = std::max(0.0, 1.0 - mass.value());
        return table;
      }
      previous = q;
    }
  }
}

double sfpd_variance_factor(double alpha_s) {
  const double log_factor = 0.5 * std::log(std::numbers::pi) + log_abs_gamma(1.0 + alpha_s) -
                            (2.0 * alpha_s - 1.0) * std::numbers::ln2 -
                            log_abs_gamma(0.5 + alpha_s);
  return std::exp(log_factor);
}

MeanVariance sfpd_mean_variance(const SfpdParams& p) {
  validate(p);
  const double mean = p.nu * std::pow(p.lambda, p.alpha_s) * reciprocal_gamma(1.0 + p.alpha_s);
  const double variance = mean + mean * mean * (sfpd_variance_factor(p.alpha_s) - 1.0);
  return {mean, variance};
}

}  // namespace mlpoisson
