#include "mlpoisson/numeric/big_float.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mlpoisson::numeric {

namespace {

// Raises the precision of `target` (value preserved) so that an in-place
// operation with `other` does not round away the other operand's bits.
void widen_to(mpfr_ptr target, mpfr_srcptr other) {
  if (mpfr_get_prec(other) > mpfr_get_prec(target)) {
    mpfr_prec_round(target, mpfr_get_prec(other), MPFR_RNDN);
  }
}

}  // namespace

unsigned long bits_for_digits(unsigned digits) {
  return static_cast<unsigned long>(std::ceil(digits * 3.321928094887362)) + 8;
}

BigFloat::BigFloat(unsigned long precision_bits) {
  mpfr_init2(value_, static_cast<mpfr_prec_t>(std::max<unsigned long>(precision_bits, MPFR_PREC_MIN)));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, unsigned long precision_bits) : BigFloat(precision_bits) {
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat& BigFloat::operator=(double value) {
  mpfr_set_d(value_, value, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(unsigned long rhs) {
  mpfr_mul_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(unsigned long rhs) {
  mpfr_div_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

double BigFloat::log_abs() const {
  if (is_zero()) {
    return -HUGE_VAL;
  }
  long exponent = 0;
  const double mantissa = std::abs(to_double_2exp(exponent));
  return std::log(mantissa) + static_cast<double>(exponent) * 0.69314718055994530942;
}

double BigFloat::to_double_2exp(long& exponent) const {
  return mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
}

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(x);
  mpfr_abs(r.value_, r.value_, MPFR_RNDN);
  return r;
}

BigFloat exp(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_exp(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_log(r.value_, x.value_, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& base, const BigFloat& exponent) {
  BigFloat r(std::max(base.precision(), exponent.precision()));
  mpfr_pow(r.value_, base.value_, exponent.value_, MPFR_RNDN);
  return r;
}

BigFloat log_abs_gamma(const BigFloat& x, int& sign) {
  BigFloat r(x.precision());
  mpfr_lgamma(r.value_, &sign, x.value_, MPFR_RNDN);
  return r;
}

}  // namespace mlpoisson::numeric
