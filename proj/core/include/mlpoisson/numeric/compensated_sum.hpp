#pragma once

#include <cmath>

namespace mlpoisson::numeric {

// Kahan-Babuska-Neumaier summation. The compensation term tracks the
// low-order bits lost by each addition, including when the new term is
// larger in magnitude than the running sum.
class NeumaierSum {
 public:
  constexpr NeumaierSum() = default;
  constexpr explicit NeumaierSum(double initial) : sum_(initial) {}

  constexpr void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  constexpr NeumaierSum& operator+=(double term) {
    add(term);
    return *this;
  }

  constexpr double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace mlpoisson::numeric
