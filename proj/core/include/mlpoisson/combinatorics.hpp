#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace mlpoisson {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Largest row index supported by the Stirling table.
inline constexpr unsigned kMaxStirlingRow = 64;

/// Exact Stirling numbers of the second kind S(n, k), 0 <= k <= n <= n_max,
/// filled from S(n, k) = k S(n-1, k) + S(n-1, k-1). Values pass the 64-bit
/// range around n = 26, hence arbitrary-precision entries.
///
/// Immutable after construction.
class StirlingTable {
 public:
  explicit StirlingTable(unsigned n_max);

  unsigned n_max() const { return n_max_; }

  /// S(n, k); throws OutOfRange outside 0 <= k <= n <= n_max.
  const BigInt& operator()(unsigned n, unsigned k) const;

  /// Process-wide table up to kMaxStirlingRow, built on first use.
  static const StirlingTable& shared();

 private:
  unsigned n_max_;
  std::vector<std::vector<BigInt>> rows_;
};

/// S(n, k) for k <= n <= 64.
BigInt stirling2(unsigned n, unsigned k);

/// Coefficients c_0..c_n of the Bell (Touchard) polynomial
/// B_n(x) = sum_{k=1}^{n} S(n, k) x^k, with B_0(x) = 1.
std::vector<BigInt> bell_coefficients(unsigned n);

/// B_n(x) by Horner evaluation over the exact coefficients.
double bell_polynomial(unsigned n, double x);

/// B_n(x) in exact rational arithmetic.
BigRational bell_polynomial(unsigned n, const BigRational& x);

}  // namespace mlpoisson
