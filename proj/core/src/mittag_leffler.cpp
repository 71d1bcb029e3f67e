#include "mlpoisson/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mlpoisson/errors.hpp"
#include "mlpoisson/gamma.hpp"
#include "mlpoisson/numeric/big_float.hpp"
#include "mlpoisson/numeric/compensated_sum.hpp"

namespace mlpoisson {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Terms before the dominant one are summed directly when the dominant index
// is this close to the start of the series.
constexpr std::size_t kPeakSearchThreshold = 32;

// Alternating sums whose sum(|t|)/|sum(t)| exceeds this are redone in MPFR.
constexpr double kCancellationLimit = 64.0;
// Condition numbers beyond this leave no correct bits in double.
constexpr double kSaturatedCondition = 0x1p40;

// Partial sums are rescaled before their exponent grows past this.
constexpr double kRescaleHeadroom = 300.0;

void check_params(const MLParams& p) {
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw InvalidParams("Mittag-Leffler order alpha must be positive and finite, got " +
                        std::to_string(p.alpha));
  }
  if (!std::isfinite(p.beta)) {
    throw InvalidParams("Mittag-Leffler shift beta must be finite");
  }
}

void check_argument(double x) {
  if (!std::isfinite(x)) {
    throw InvalidParams("Mittag-Leffler argument must be finite");
  }
}

void check_order(unsigned n) {
  if (n > kMaxDerivativeOrder) {
    throw InvalidParams("derivative order " + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(kMaxDerivativeOrder));
  }
}

struct LogTerm {
  double log_abs;
  int sign;  // 0 for a term that vanishes at a gamma pole
};

// Term k of sum_{k>=n} k!/(k-n)! x^(k-n) / Gamma(beta + alpha k), in log form.
class DerivativeSeries {
 public:
  DerivativeSeries(const MLParams& p, double x, unsigned n)
      : p_(p), x_(x), n_(n), log_abs_x_(std::log(std::abs(x))) {}

  unsigned order() const { return n_; }

  LogTerm term(std::size_t k) const {
    const SignedLogGamma g = log_gamma(p_.beta + p_.alpha * static_cast<double>(k));
    if (g.sign == 0) {
      return {kNegInf, 0};
    }
    const std::size_t power = k - n_;
    double log_falling = 0.0;
    for (unsigned j = 0; j < n_; ++j) {
      log_falling += std::log(static_cast<double>(k - j));
    }
    const double log_power = power == 0 ? 0.0 : static_cast<double>(power) * log_abs_x_;
    const int sign = (x_ < 0.0 && (power % 2) == 1) ? -g.sign : g.sign;
    return {log_falling + log_power - g.log_abs, sign};
  }

  // First index from which every gamma argument is positive, so that the
  // log-term is concave in k and |terms| fall monotonically past the peak.
  std::size_t first_positive_index() const {
    if (p_.beta > 0.0) {
      return n_;
    }
    const double k = std::floor(-p_.beta / p_.alpha) + 1.0;
    return std::max<std::size_t>(n_, static_cast<std::size_t>(k));
  }

 private:
  MLParams p_;
  double x_;
  unsigned n_;
  double log_abs_x_;
};

// Neumaier sum of sign * exp(log_abs - scale) terms, with the scale moved
// up whenever a term would push the partial sum towards overflow.
class ScaledAccumulator {
 public:
  void add(const LogTerm& t) {
    if (t.sign == 0) {
      return;
    }
    if (!started_) {
      scale_ = t.log_abs;
      started_ = true;
    } else if (t.log_abs > scale_ + kRescaleHeadroom) {
      const double factor = std::exp(scale_ - t.log_abs);
      sum_ = numeric::NeumaierSum(sum_.value() * factor);
      abs_sum_ *= factor;
      scale_ = t.log_abs;
    }
    const double v = std::exp(t.log_abs - scale_);
    sum_.add(t.sign > 0 ? v : -v);
    abs_sum_ += v;
  }

  // True when |t| <= rel_tol * |partial sum|.
  bool negligible(const LogTerm& t, double rel_tol) const {
    if (!started_) {
      return false;
    }
    const double s = std::abs(sum_.value());
    if (s == 0.0) {
      return false;
    }
    return t.log_abs - scale_ <= std::log(rel_tol * s);
  }

  double condition() const {
    const double s = std::abs(sum_.value());
    return s == 0.0 ? std::numeric_limits<double>::infinity() : abs_sum_ / s;
  }

  // log2 of the condition number. Past double resolution the computed sum
  // is rounding noise, so assume a result of order one instead.
  double log2_condition() const {
    const double c = condition();
    if (c < kSaturatedCondition) {
      return std::log2(c);
    }
    return std::max(std::log2(kSaturatedCondition),
                    (std::log(abs_sum_) + scale_) / std::numbers::ln2 + 64.0);
  }

  ScaledValue result() const { return {sum_.value(), started_ ? scale_ : 0.0}; }

 private:
  numeric::NeumaierSum sum_;
  double abs_sum_ = 0.0;
  double scale_ = 0.0;
  bool started_ = false;
};

// Applies the stopping rule: `consecutive_small` successive negligible
// terms, not counting terms that vanish at a gamma pole.
class StopRule {
 public:
  explicit StopRule(const SeriesControl& ctl) : ctl_(ctl) {}

  bool should_stop(const LogTerm& t, const ScaledAccumulator& acc) {
    if (t.sign == 0) {
      return false;
    }
    if (acc.negligible(t, ctl_.rel_tol)) {
      ++run_;
    } else {
      run_ = 0;
    }
    return run_ >= ctl_.consecutive_small;
  }

  void reset() { run_ = 0; }

 private:
  const SeriesControl& ctl_;
  std::size_t run_ = 0;
};

[[noreturn]] void throw_non_convergence(const MLParams& p, double x, unsigned n,
                                        const SeriesControl& ctl) {
  throw NonConvergence("Mittag-Leffler series (alpha=" + std::to_string(p.alpha) +
                       ", beta=" + std::to_string(p.beta) + ", x=" + std::to_string(x) +
                       ", derivative " + std::to_string(n) + ") did not converge within " +
                       std::to_string(ctl.max_terms) + " terms");
}

// Dominant term index of a positive-argument series, found by bracketing
// the sign change of L(k+1) - L(k) and bisecting. Requires concavity on
// [k_lo, inf).
std::size_t find_peak(const DerivativeSeries& s, std::size_t k_lo, std::size_t guess) {
  auto rising = [&](std::size_t k) { return s.term(k + 1).log_abs > s.term(k).log_abs; };
  // Bracket so that rising(lo) holds and rising(hi) does not.
  std::size_t lo = std::max(guess, k_lo);
  std::size_t hi = lo;
  std::size_t step = 1;
  if (rising(lo)) {
    hi = lo + 1;
    while (rising(hi)) {
      lo = hi;
      hi += step;
      step *= 2;
    }
  } else {
    while (true) {
      if (lo == k_lo) {
        return k_lo;
      }
      const std::size_t next = lo - std::min(step, lo - k_lo);
      if (rising(next)) {
        lo = next;
        break;
      }
      hi = next;
      lo = next;
      step *= 2;
    }
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (rising(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Straight summation from k = n upward.
ScaledAccumulator sum_ascending(const DerivativeSeries& s, const MLParams& p, double x,
                                const SeriesControl& ctl) {
  ScaledAccumulator acc;
  StopRule stop(ctl);
  const std::size_t n = s.order();
  // Terms only fall monotonically once the gamma arguments are positive and
  // the dominant term has been passed.
  const std::size_t k_mono = s.first_positive_index();
  for (std::size_t i = 0;; ++i) {
    if (i >= ctl.max_terms) {
      throw_non_convergence(p, x, s.order(), ctl);
    }
    const std::size_t k = n + i;
    const LogTerm t = s.term(k);
    acc.add(t);
    if (stop.should_stop(t, acc) && k > k_mono) {
      break;
    }
  }
  return acc;
}

// MPFR evaluation of the same series, used when double summation cancels.
ScaledValue sum_multiprecision(const MLParams& p, double x, unsigned n, const SeriesControl& ctl,
                               double log2_condition) {
  using numeric::BigFloat;
  double log2_cond = std::isfinite(log2_condition) ? log2_condition : 64.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto bits = static_cast<unsigned long>(96.0 + std::max(0.0, log2_cond));
    BigFloat sum(bits);
    BigFloat abs_sum(bits);
    BigFloat power(1.0, bits);  // x^(k-n)
    BigFloat falling(1.0, bits);  // k!/(k-n)!
    for (unsigned j = 2; j <= n; ++j) {
      falling *= j;
    }
    const BigFloat xb(x, bits);
    BigFloat arg(bits);
    BigFloat gamma(bits);
    BigFloat term(bits);
    const BigFloat rel_tol(ctl.rel_tol, bits);
    std::size_t run = 0;
    bool converged = false;
    const DerivativeSeries shape(p, x, n);
    const std::size_t k_mono = shape.first_positive_index();
    for (std::size_t i = 0; i < ctl.max_terms; ++i) {
      const std::size_t k = n + i;
      if (i > 0) {
        power *= xb;
        falling *= static_cast<unsigned long>(k);
        falling /= static_cast<unsigned long>(k - n);
      }
      mpfr_set_d(arg.get(), p.alpha, MPFR_RNDN);
      mpfr_mul_ui(arg.get(), arg.get(), static_cast<unsigned long>(k), MPFR_RNDN);
      mpfr_add_d(arg.get(), arg.get(), p.beta, MPFR_RNDN);
      if (mpfr_integer_p(arg.get()) && mpfr_sgn(arg.get()) <= 0) {
        continue;  // 1/Gamma vanishes at the pole
      }
      mpfr_gamma(gamma.get(), arg.get(), MPFR_RNDN);
      term = power;
      term *= falling;
      term /= gamma;
      sum += term;
      abs_sum += abs(term);
      if (!sum.is_zero() && !(abs(sum) * rel_tol < abs(term))) {
        ++run;
      } else {
        run = 0;
      }
      if (run >= ctl.consecutive_small && k > k_mono) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw_non_convergence(p, x, n, ctl);
    }
    if (sum.is_zero()) {
      log2_cond = 2.0 * (log2_cond + 64.0);
      continue;
    }
    const double lost_bits = (abs_sum.log_abs() - sum.log_abs()) / std::numbers::ln2;
    if (lost_bits + 64.0 > static_cast<double>(bits)) {
      // A rounded-away sum understates the loss, so grow at least geometrically.
      log2_cond = std::max(lost_bits + 32.0, 2.0 * log2_cond + 64.0);
      continue;
    }
    long exponent = 0;
    const double mantissa = sum.to_double_2exp(exponent);
    return {mantissa, static_cast<double>(exponent) * std::numbers::ln2};
  }
  throw NonConvergence("Mittag-Leffler series cancellation could not be resolved in multiprecision");
}

// Per-order sums of k!/(k-j)! w_k, j = 0..n_max, where w_k is supplied as a
// log relative to a common scale.
class FamilyAccumulator {
 public:
  FamilyAccumulator(unsigned n_max, double scale)
      : sums_(n_max + 1), abs_sums_(n_max + 1, 0.0), scale_(scale) {}

  // Adds sign * exp(log_abs) with log_abs absolute; rescales on growth.
  void add_absolute(std::size_t k, double log_abs, int sign) {
    if (sign == 0) {
      return;
    }
    if (!started_) {
      scale_ = log_abs;
      started_ = true;
    } else if (log_abs > scale_ + kRescaleHeadroom) {
      const double factor = std::exp(scale_ - log_abs);
      for (std::size_t j = 0; j < sums_.size(); ++j) {
        sums_[j] = numeric::NeumaierSum(sums_[j].value() * factor);
        abs_sums_[j] *= factor;
      }
      scale_ = log_abs;
    }
    add_relative(k, log_abs - scale_, sign);
  }

  // Adds sign * exp(scale + rel); the scale must already be fixed.
  void add_relative(std::size_t k, double rel, int sign) {
    started_ = true;
    last_ = exp_falling(k, std::exp(rel));
    for (std::size_t j = 0; j < sums_.size(); ++j) {
      sums_[j].add(sign > 0 ? last_[j] : -last_[j]);
      abs_sums_[j] += last_[j];
    }
  }

  // True when the last term of every order is below rel_tol of its sum.
  bool last_negligible(double rel_tol) const {
    for (std::size_t j = 0; j < sums_.size(); ++j) {
      const double s = std::abs(sums_[j].value());
      if (s == 0.0 || !(last_[j] <= rel_tol * s)) {
        return false;
      }
    }
    return true;
  }

  double condition(std::size_t j) const {
    const double s = std::abs(sums_[j].value());
    return s == 0.0 ? std::numeric_limits<double>::infinity() : abs_sums_[j] / s;
  }

  double value(std::size_t j) const { return sums_[j].value(); }
  double scale() const { return scale_; }
  std::size_t orders() const { return sums_.size(); }

 private:
  std::vector<double> exp_falling(std::size_t k, double w) const {
    std::vector<double> out(sums_.size());
    double f = w;
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = f;
      f *= static_cast<double>(k) - static_cast<double>(j);
    }
    return out;
  }

  std::vector<numeric::NeumaierSum> sums_;
  std::vector<double> abs_sums_;
  std::vector<double> last_;
  double scale_;
  bool started_ = false;
};

class FamilyStop {
 public:
  explicit FamilyStop(const SeriesControl& ctl) : ctl_(ctl) {}

  bool should_stop(int sign, const FamilyAccumulator& acc) {
    if (sign == 0) {
      return false;
    }
    run_ = acc.last_negligible(ctl_.rel_tol) ? run_ + 1 : 0;
    return run_ >= ctl_.consecutive_small;
  }

  void reset() { run_ = 0; }

 private:
  const SeriesControl& ctl_;
  std::size_t run_ = 0;
};

void check_family(const FamilyAccumulator& acc, const MLParams& p, double x, unsigned n_max,
                  const SeriesControl& ctl) {
  for (std::size_t j = 0; j < acc.orders(); ++j) {
    if (!std::isfinite(acc.value(j))) {
      throw_non_convergence(p, x, n_max, ctl);
    }
  }
}

// x^j E^(j)(x) for j = 0..n_max and x > 0. Large arguments are summed outward
// from the dominant term, with consecutive log-weights linked through
// log-gamma differences so that every order shares one exactly known scale.
EulerDerivatives euler_family(const MLParams& p, double x, unsigned n_max,
                              const SeriesControl& ctl) {
  const DerivativeSeries s0(p, x, 0);
  const double log_x = std::log(x);
  const double centre = std::pow(x, 1.0 / p.alpha);
  // Width of the dominant block of terms, about sqrt(centre)/alpha.
  const double width = 20.0 * (std::sqrt(centre) / p.alpha + 1.0);
  if (!std::isfinite(centre) || width > static_cast<double>(ctl.max_terms)) {
    throw_non_convergence(p, x, n_max, ctl);
  }
  const double guess = (centre + 0.5 - p.beta) / p.alpha;
  const std::size_t k_pos = s0.first_positive_index();
  EulerDerivatives out;

  if (guess > static_cast<double>(k_pos + kPeakSearchThreshold)) {
    const std::size_t peak = find_peak(s0, k_pos, static_cast<std::size_t>(guess));
    FamilyAccumulator acc(n_max, s0.term(peak).log_abs);
    FamilyStop stop(ctl);
    // L(k+1) - L(k) for k >= k_pos, where every gamma argument is positive.
    auto step = [&](std::size_t k) {
      return log_x - log_gamma_ratio(p.beta + p.alpha * static_cast<double>(k), p.alpha);
    };
    std::size_t count = 1;
    acc.add_relative(peak, 0.0, 1);
    double rel = 0.0;
    for (std::size_t k = peak + 1;; ++k) {
      if (++count > ctl.max_terms) {
        throw_non_convergence(p, x, n_max, ctl);
      }
      rel += step(k - 1);
      acc.add_relative(k, rel, 1);
      if (stop.should_stop(1, acc)) {
        break;
      }
    }
    stop.reset();
    rel = 0.0;
    bool stopped = false;
    std::size_t k = peak;
    while (k > k_pos) {
      if (++count > ctl.max_terms) {
        throw_non_convergence(p, x, n_max, ctl);
      }
      --k;
      rel -= step(k);
      acc.add_relative(k, rel, 1);
      if (stop.should_stop(1, acc)) {
        stopped = true;
        break;
      }
    }
    if (!stopped) {
      // Terms below k_pos can carry either sign; they are summed in full.
      while (k-- > 0) {
        const LogTerm t = s0.term(k);
        if (t.sign != 0) {
          acc.add_relative(k, t.log_abs - acc.scale(), t.sign);
        }
      }
    }
    check_family(acc, p, x, n_max, ctl);
    out.log_scale = acc.scale();
    for (std::size_t j = 0; j <= n_max; ++j) {
      out.mantissa.push_back(acc.value(j));
    }
    return out;
  }

  FamilyAccumulator acc(n_max, 0.0);
  FamilyStop stop(ctl);
  for (std::size_t k = 0;; ++k) {
    if (k >= ctl.max_terms) {
      throw_non_convergence(p, x, n_max, ctl);
    }
    const LogTerm t = s0.term(k);
    acc.add_absolute(k, t.log_abs, t.sign);
    if (stop.should_stop(t.sign, acc) && k > k_pos && k > n_max) {
      break;
    }
  }
  check_family(acc, p, x, n_max, ctl);
  out.log_scale = acc.scale();
  for (std::size_t j = 0; j <= n_max; ++j) {
    if (acc.condition(j) > kCancellationLimit) {
      const ScaledValue d = sum_multiprecision(p, x, static_cast<unsigned>(j), ctl,
                                               std::log2(acc.condition(j)));
      out.mantissa.push_back(d.mantissa *
                             std::exp(d.log_scale + static_cast<double>(j) * log_x - out.log_scale));
    } else {
      out.mantissa.push_back(acc.value(j));
    }
  }
  return out;
}

ScaledValue direct_series(const MLParams& p, double x, unsigned n, const SeriesControl& ctl) {
  if (x > 0.0) {
    const EulerDerivatives f = euler_family(p, x, n, ctl);
    return {f.mantissa[n], f.log_scale - static_cast<double>(n) * std::log(x)};
  }
  if (x == 0.0) {
    // Only the k = n term survives: n! / Gamma(beta + alpha n).
    double factorial = 1.0;
    for (unsigned j = 2; j <= n; ++j) {
      factorial *= j;
    }
    return {factorial * reciprocal_gamma(p.beta + p.alpha * n), 0.0};
  }
  const DerivativeSeries s(p, x, n);
  const ScaledAccumulator acc = sum_ascending(s, p, x, ctl);
  if (acc.condition() > kCancellationLimit) {
    return sum_multiprecision(p, x, n, ctl, acc.log2_condition());
  }
  return acc.result();
}

ScaledValue parameter_shift(const MLParams& p, double x, unsigned n, const SeriesControl& ctl) {
  // After j applications, coeffs[i] multiplies E_{alpha, beta + j alpha - i}.
  std::vector<double> coeffs{1.0};
  for (unsigned j = 0; j < n; ++j) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const double b = p.beta + j * p.alpha - static_cast<double>(i);
      next[i] += coeffs[i] * (1.0 - b) / p.alpha;
      next[i + 1] += coeffs[i] / p.alpha;
    }
    coeffs = std::move(next);
  }
  std::vector<ScaledValue> parts;
  parts.reserve(coeffs.size());
  double scale = kNegInf;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) {
      parts.push_back({0.0, 0.0});
      continue;
    }
    const MLParams shifted{p.alpha, p.beta + n * p.alpha - static_cast<double>(i)};
    parts.push_back(ml_eval_scaled(shifted, x, ctl));
    if (parts.back().mantissa != 0.0) {
      scale = std::max(scale, parts.back().log_abs());
    }
  }
  if (!std::isfinite(scale)) {
    return {0.0, 0.0};
  }
  numeric::NeumaierSum sum;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (parts[i].mantissa != 0.0) {
      sum.add(coeffs[i] * parts[i].mantissa * std::exp(parts[i].log_scale - scale));
    }
  }
  return {sum.value(), scale};
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw InvalidParams("series rel_tol must lie in (0, 1)");
  }
  if (max_terms < 10) {
    throw InvalidParams("series max_terms must be at least 10");
  }
  if (consecutive_small < 1) {
    throw InvalidParams("series consecutive_small must be at least 1");
  }
}

ScaledValue ml_eval_scaled(const MLParams& p, double x, const SeriesControl& ctl) {
  check_params(p);
  check_argument(x);
  ctl.validate();
  return direct_series(p, x, 0, ctl);
}

double ml_eval(const MLParams& p, double x, const SeriesControl& ctl) {
  return ml_eval_scaled(p, x, ctl).value();
}

ScaledValue ml_derivative_scaled(const MLParams& p, double x, unsigned n, const SeriesControl& ctl,
                                 DerivativeMethod method) {
  check_params(p);
  check_argument(x);
  check_order(n);
  ctl.validate();
  if (method == DerivativeMethod::parameter_shift) {
    return parameter_shift(p, x, n, ctl);
  }
  return direct_series(p, x, n, ctl);
}

double ml_derivative(const MLParams& p, double x, unsigned n, const SeriesControl& ctl,
                     DerivativeMethod method) {
  return ml_derivative_scaled(p, x, n, ctl, method).value();
}

EulerDerivatives ml_euler_derivatives(const MLParams& p, double x, unsigned n_max,
                                      const SeriesControl& ctl) {
  check_params(p);
  check_order(n_max);
  ctl.validate();
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidParams("Euler-form derivatives require a positive finite argument");
  }
  return euler_family(p, x, n_max, ctl);
}

AsymptoticValue ml_asymptotic(const MLParams& p, double x) {
  check_params(p);
  if (!(p.alpha < 2.0)) {
    throw InvalidParams("large-argument Mittag-Leffler expansion requires 0 < alpha < 2");
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidParams("large-argument Mittag-Leffler expansion requires x > 0");
  }
  const double log_x = std::log(x);
  const double log_value =
      -std::log(p.alpha) + (1.0 - p.beta) / p.alpha * log_x + std::exp(log_x / p.alpha);
  return {log_value, std::exp(log_value)};
}

}  // namespace mlpoisson
