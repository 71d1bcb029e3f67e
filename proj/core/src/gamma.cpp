#include "mlpoisson/gamma.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace mlpoisson {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

// Lanczos sum A_g(x) for Gamma(x) = sqrt(2 pi) t^(x - 1/2) e^(-t) A_g(x),
// t = x + g - 1/2. Valid for x >= 0.5.
double lanczos_sum(double x) {
  double a = kLanczosCoeffs[0];
  const double xm1 = x - 1.0;
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    a += kLanczosCoeffs[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

double log_gamma_lanczos(double x) {
  const double t = x + kLanczosG - 0.5;
  return kHalfLogTwoPi + (x - 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

// Bernoulli-number corrections B_{2j} / (2j (2j - 1) x^(2j - 1)), j = 1..5.
double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 +
                inv2 * (-1.0 / 360.0 +
                        inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
}

double log_gamma_stirling(double x) {
  return (x - 0.5) * std::log(x) - x + kHalfLogTwoPi + stirling_correction(x);
}

// Positive branch, x >= 0.5.
double log_gamma_positive(double x) {
  return x > 20.0 ? log_gamma_stirling(x) : log_gamma_lanczos(x);
}

}  // namespace

double sin_pi(double x) {
  // fmod is exact, so the reduced argument carries no rounding error.
  double r = std::fmod(x, 2.0);
  if (r < 0.0) {
    r += 2.0;
  }
  if (r == 0.0 || r == 1.0) {
    return 0.0;
  }
  double sign = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) {
    r = 1.0 - r;
  }
  return sign * (r == 0.5 ? 1.0 : std::sin(std::numbers::pi * r));
}

bool is_gamma_pole(double x) { return x <= 0.0 && x == std::nearbyint(x); }

SignedLogGamma log_gamma(double x) {
  if (is_gamma_pole(x)) {
    return {std::numeric_limits<double>::infinity(), 0};
  }
  if (x >= 0.5) {
    return {log_gamma_positive(x), 1};
  }
  // Gamma(x) Gamma(1 - x) = pi / sin(pi x); Gamma(1 - x) > 0 here.
  const double s = sin_pi(x);
  return {std::log(std::numbers::pi) - std::log(std::abs(s)) - log_gamma_positive(1.0 - x),
          s > 0.0 ? 1 : -1};
}

double log_abs_gamma(double x) { return log_gamma(x).log_abs; }

double log_gamma_ratio(double y, double a) {
  const double z = y + a;
  if (y > 20.0 && z > 20.0) {
    // Difference of two Stirling series with the large logarithms folded
    // into log1p.
    return (y - 0.5) * std::log1p(a / y) + a * std::log(z) - a +
           (stirling_correction(z) - stirling_correction(y));
  }
  return log_gamma(z).log_abs - log_gamma(y).log_abs;
}

double reciprocal_gamma(double x) {
  if (is_gamma_pole(x)) {
    return 0.0;
  }
  if (x >= 0.5 && x <= 20.0) {
    const double t = x + kLanczosG - 0.5;
    return std::exp(t) * std::pow(t, 0.5 - x) / (std::sqrt(2.0 * std::numbers::pi) * lanczos_sum(x));
  }
  if (x > 20.0) {
    return std::exp(-log_gamma_stirling(x));
  }
  // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
  const double s = sin_pi(x);
  return s / std::numbers::pi * std::exp(log_gamma_positive(1.0 - x));
}

}  // namespace mlpoisson
