#include "mlpoisson/combinatorics.hpp"

#include <string>

#include "mlpoisson/errors.hpp"

namespace mlpoisson {

namespace {

void check_row(unsigned n) {
  if (n > kMaxStirlingRow) {
    throw OutOfRange("Stirling/Bell index " + std::to_string(n) + " exceeds the cap of " +
                     std::to_string(kMaxStirlingRow));
  }
}

template <typename Value, typename Convert>
Value horner(const std::vector<BigInt>& coeffs, const Value& x, Convert convert) {
  Value acc = convert(coeffs.back());
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    acc = acc * x + convert(coeffs[i]);
  }
  return acc;
}

}  // namespace

StirlingTable::StirlingTable(unsigned n_max) : n_max_(n_max), rows_(n_max + 1) {
  rows_[0] = {BigInt(1)};
  for (unsigned n = 1; n <= n_max; ++n) {
    auto& row = rows_[n];
    const auto& prev = rows_[n - 1];
    row.assign(n + 1, BigInt(0));
    for (unsigned k = 1; k <= n; ++k) {
      BigInt v = prev.size() > k ? BigInt(k * prev[k]) : BigInt(0);
      v += prev[k - 1];
      row[k] = std::move(v);
    }
  }
}

const BigInt& StirlingTable::operator()(unsigned n, unsigned k) const {
  if (n > n_max_ || k > n) {
    throw OutOfRange("S(" + std::to_string(n) + ", " + std::to_string(k) +
                     ") outside the table (n_max = " + std::to_string(n_max_) + ")");
  }
  return rows_[n][k];
}

const StirlingTable& StirlingTable::shared() {
  static const StirlingTable table(kMaxStirlingRow);
  return table;
}

BigInt stirling2(unsigned n, unsigned k) {
  check_row(n);
  return StirlingTable::shared()(n, k);
}

std::vector<BigInt> bell_coefficients(unsigned n) {
  check_row(n);
  const auto& table = StirlingTable::shared();
  std::vector<BigInt> coeffs(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    coeffs[k] = table(n, k);
  }
  return coeffs;
}

double bell_polynomial(unsigned n, double x) {
  return horner(bell_coefficients(n), x,
                [](const BigInt& c) { return c.convert_to<double>(); });
}

BigRational bell_polynomial(unsigned n, const BigRational& x) {
  return horner(bell_coefficients(n), x, [](const BigInt& c) { return BigRational(c); });
}

}  // namespace mlpoisson
