#pragma once

#include <mpfr.h>

#include <string>

namespace mlpoisson::numeric {

/// Bits of binary precision needed to carry `digits` significant decimal digits.
unsigned long bits_for_digits(unsigned digits);

/// Owning RAII handle around an MPFR number. Every value carries its own
/// precision; binary operators produce a result at the larger of the operand
/// precisions, so there is no process-wide precision state.
class BigFloat {
 public:
  explicit BigFloat(unsigned long precision_bits);
  BigFloat(double value, unsigned long precision_bits);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  unsigned long precision() const { return static_cast<unsigned long>(mpfr_get_prec(value_)); }

  BigFloat& operator=(double value);
  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat& operator*=(unsigned long rhs);
  BigFloat& operator/=(unsigned long rhs);

  BigFloat operator-() const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Natural log of |value|, finite even when the value lies outside the
  /// double exponent range. -inf for zero.
  double log_abs() const;

  /// Splits the value into mantissa * 2^exponent with mantissa in [0.5, 1).
  double to_double_2exp(long& exponent) const;

  std::string to_string(int digits) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  friend BigFloat abs(const BigFloat& x);
  friend BigFloat exp(const BigFloat& x);
  friend BigFloat log(const BigFloat& x);
  friend BigFloat pow(const BigFloat& base, const BigFloat& exponent);
  /// ln|Gamma(x)|, together with the sign of Gamma(x).
  friend BigFloat log_abs_gamma(const BigFloat& x, int& sign);

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }

 private:
  mpfr_t value_;
};

inline BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
inline BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
inline BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
inline BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

}  // namespace mlpoisson::numeric
