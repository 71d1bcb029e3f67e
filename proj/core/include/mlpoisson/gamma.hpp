#pragma once

namespace mlpoisson {

/// ln|Gamma(x)| paired with the sign of Gamma(x). At the poles
/// (x = 0, -1, -2, ...) sign is 0 and log_abs is +inf.
struct SignedLogGamma {
  double log_abs;
  int sign;
};

/// Real-line gamma kernel. Lanczos (g = 7, 9 coefficients) on [0.5, 20],
/// the Stirling series above 20 and the reflection formula below 0.5.
SignedLogGamma log_gamma(double x);

/// ln|Gamma(x)|; +inf at the poles.
double log_abs_gamma(double x);

/// ln Gamma(y + a) - ln Gamma(y) for y > 0 and y + a > 0, without the
/// cancellation of subtracting two large log-gammas.
double log_gamma_ratio(double y, double a);

/// 1/Gamma(x), entire on the real line: exactly 0 at the poles, and
/// underflows gracefully instead of overflowing Gamma for large x.
double reciprocal_gamma(double x);

/// sin(pi x) with exact argument reduction, so integers give exactly 0.
double sin_pi(double x);

/// True when x is 0 or a negative integer.
bool is_gamma_pole(double x);

}  // namespace mlpoisson
