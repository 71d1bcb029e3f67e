#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mlpoisson/errors.hpp"
#include "mlpoisson/mittag_leffler.hpp"
#include "oracle_values.hpp"

namespace mlpoisson {
namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(MittagLeffler, ExponentialCase) {
  for (double x = -10.0; x <= 30.0; x += 0.25) {
    EXPECT_LT(rel_err(ml_eval({1.0, 1.0}, x), std::exp(x)), 1e-12) << "x=" << x;
  }
}

TEST(MittagLeffler, HyperbolicCosineCase) {
  for (double x = 0.0; x <= 100.0; x += 0.5) {
    EXPECT_LT(rel_err(ml_eval({2.0, 1.0}, x), std::cosh(std::sqrt(x))), 1e-12) << "x=" << x;
  }
}

TEST(MittagLeffler, ShiftedExponentialCase) {
  // E_{1,2}(x) = (e^x - 1) / x
  for (double x : {-5.0, -0.5, 0.3, 2.0, 17.0}) {
    EXPECT_LT(rel_err(ml_eval({1.0, 2.0}, x), std::expm1(x) / x), 1e-12) << "x=" << x;
  }
}

TEST(MittagLeffler, ZeroArgumentIsReciprocalGammaOfBeta) {
  EXPECT_NEAR(ml_eval({0.7, 3.0}, 0.0), 0.5, 1e-15);
  EXPECT_EQ(ml_eval({0.7, -2.0}, 0.0), 0.0);
  // n-th derivative at zero: n! / Gamma(beta + alpha n).
  EXPECT_NEAR(ml_derivative({0.5, 1.0}, 0.0, 2), 2.0 / std::tgamma(2.0), 1e-14);
  EXPECT_NEAR(ml_derivative({1.0, 1.0}, 0.0, 5), 1.0, 1e-14);
}

TEST(MittagLeffler, ReferenceValues) {
  EXPECT_LT(rel_err(ml_eval({0.755, 10.40}, 5.0), oracle::kMl_0755_1040_at5), 1e-12);
  EXPECT_LT(rel_err(ml_eval({1.0, -4.0}, 2.0), oracle::kMl_1_m4_at2), 1e-12);
  EXPECT_LT(rel_err(ml_eval({0.5, 1.0}, -3.0), oracle::kMl_05_1_atm3), 1e-12);
  EXPECT_LT(rel_err(ml_eval({0.3, 1.0}, -2.0), oracle::kMl_03_1_atm2), 1e-12);
  EXPECT_LT(rel_err(ml_eval_scaled({0.5, 1.0}, 30.0).log_abs(), oracle::kLogMl_05_1_at30), 1e-13);
}

TEST(MittagLeffler, SevereCancellationResolvedInMultiprecision) {
  // Alternating terms peak near 1e340 while the sum is about 2e-2.
  EXPECT_LT(rel_err(ml_eval({0.5, 1.0}, -30.0), oracle::kMl_05_1_atm30), 1e-12);
}

TEST(MittagLeffler, PoleTermsAreSkipped) {
  // E_{1,0}(x) = x e^x: the k = 0 term sits on a gamma pole.
  for (double x : {-3.0, 0.5, 4.0}) {
    EXPECT_LT(rel_err(ml_eval({1.0, 0.0}, x), x * std::exp(x)), 1e-12) << "x=" << x;
  }
}

TEST(MittagLeffler, ScaledFormSurvivesOverflow) {
  const ScaledValue v = ml_eval_scaled({1.0, 1.0}, 5000.0);
  EXPECT_TRUE(std::isinf(v.value()));
  EXPECT_LT(rel_err(v.log_abs(), 5000.0), 1e-14);
  EXPECT_EQ(v.sign(), 1);
}

TEST(MittagLeffler, LargeArgumentLogsMatchReference) {
  const struct {
    double alpha, beta, log_value;
  } cases[] = {{0.6, 1.0, oracle::kLogMl_06_1_at200}, {0.6, 3.0, oracle::kLogMl_06_3_at200},
               {1.0, 1.0, oracle::kLogMl_10_1_at200}, {1.0, 3.0, oracle::kLogMl_10_3_at200},
               {1.4, 1.0, oracle::kLogMl_14_1_at200}, {1.4, 3.0, oracle::kLogMl_14_3_at200}};
  for (const auto& c : cases) {
    const double got = ml_eval_scaled({c.alpha, c.beta}, 200.0).log_abs();
    EXPECT_LT(rel_err(got, c.log_value), 1e-13) << c.alpha << "," << c.beta;
    const double asym = ml_asymptotic({c.alpha, c.beta}, 200.0).log_value;
    EXPECT_LT(rel_err(asym, c.log_value), 1e-2) << c.alpha << "," << c.beta;
  }
}

TEST(MittagLeffler, AsymptoticDomain) {
  EXPECT_THROW(ml_asymptotic({2.0, 1.0}, 10.0), InvalidParams);
  EXPECT_THROW(ml_asymptotic({1.0, 1.0}, -1.0), InvalidParams);
  EXPECT_DOUBLE_EQ(ml_asymptotic({1.0, 1.0}, 3.0).log_value, 3.0);
}

TEST(MittagLefflerDerivative, ReferenceValues) {
  EXPECT_LT(rel_err(ml_derivative({0.5, 2.0}, 5.0, 3), oracle::kMl_05_2_at5_d3), 1e-12);
  EXPECT_LT(rel_err(ml_derivative({0.75, 0.5}, 1.0, 2), oracle::kMl_075_05_at1_d2), 1e-12);
  EXPECT_LT(rel_err(ml_derivative({0.5, 2.0}, 5.0, 3, {}, DerivativeMethod::parameter_shift),
                    oracle::kMl_05_2_at5_d3),
            1e-10);
}

TEST(MittagLefflerDerivative, ExponentialIsItsOwnDerivative) {
  for (unsigned n = 0; n <= kMaxDerivativeOrder; ++n) {
    EXPECT_LT(rel_err(ml_derivative({1.0, 1.0}, 2.5, n), std::exp(2.5)), 1e-12) << "n=" << n;
    EXPECT_LT(rel_err(ml_derivative({1.0, 1.0}, -1.5, n), std::exp(-1.5)), 1e-12) << "n=" << n;
  }
}

TEST(MittagLefflerDerivative, MethodsAgreeOnGrid) {
  for (double a : {0.5, 0.755, 1.0, 1.5}) {
    for (double b : {0.5, 1.0, 2.0, 10.40}) {
      for (unsigned n = 1; n <= 6; ++n) {
        const double direct = ml_derivative({a, b}, 5.0, n);
        const double shift = ml_derivative({a, b}, 5.0, n, {}, DerivativeMethod::parameter_shift);
        EXPECT_LT(rel_err(shift, direct), 1e-9) << a << "," << b << " n=" << n;
      }
    }
  }
}

TEST(MittagLefflerDerivative, MatchesCentralDifferences) {
  const double h = 1e-4;
  for (double a : {0.5, 1.0, 1.5}) {
    for (double b : {0.5, 2.0}) {
      for (double x : {0.7, 5.0, -2.0}) {
        const double fd = (ml_eval({a, b}, x + h) - ml_eval({a, b}, x - h)) / (2.0 * h);
        EXPECT_LT(rel_err(ml_derivative({a, b}, x, 1), fd), 1e-5) << a << "," << b << " x=" << x;
      }
    }
  }
}

TEST(MittagLefflerDerivative, OrderCap) {
  EXPECT_THROW(ml_derivative({1.0, 1.0}, 1.0, kMaxDerivativeOrder + 1), InvalidParams);
}

TEST(EulerDerivatives, MatchIndividualDerivatives) {
  const MLParams p{0.755, 10.40};
  const double x = 5.0;
  const EulerDerivatives f = ml_euler_derivatives(p, x, 6);
  ASSERT_EQ(f.mantissa.size(), 7u);
  for (unsigned k = 0; k <= 6; ++k) {
    EXPECT_LT(rel_err(f.value(k), std::pow(x, k) * ml_derivative(p, x, k)), 1e-12) << "k=" << k;
  }
  EXPECT_DOUBLE_EQ(f.ratio(0), 1.0);
}

TEST(EulerDerivatives, ExponentialRatiosArePowers) {
  // x^k d^k/dx^k e^x / e^x = x^k, even where e^x overflows.
  const EulerDerivatives f = ml_euler_derivatives({1.0, 1.0}, 1e6, 3);
  for (unsigned k = 0; k <= 3; ++k) {
    EXPECT_LT(rel_err(f.ratio(k), std::pow(1e6, k)), 1e-12) << "k=" << k;
  }
}

TEST(EulerDerivatives, RequirePositiveArgument) {
  EXPECT_THROW(ml_euler_derivatives({1.0, 1.0}, 0.0, 2), InvalidParams);
  EXPECT_THROW(ml_euler_derivatives({1.0, 1.0}, -1.0, 2), InvalidParams);
}

TEST(SeriesControl, Validation) {
  SeriesControl ctl;
  EXPECT_NO_THROW(ctl.validate());
  ctl.rel_tol = 0.0;
  EXPECT_THROW(ctl.validate(), InvalidParams);
  ctl = {};
  ctl.max_terms = 5;
  EXPECT_THROW(ctl.validate(), InvalidParams);
  ctl = {};
  ctl.consecutive_small = 0;
  EXPECT_THROW(ctl.validate(), InvalidParams);
}

TEST(SeriesControl, TermLimitRaisesNonConvergence) {
  SeriesControl ctl;
  ctl.max_terms = 20;
  EXPECT_THROW(ml_eval({1.0, 1.0}, 50.0, ctl), NonConvergence);
  EXPECT_THROW(ml_eval({0.5, 1.0}, 1e6, ctl), NonConvergence);
}

TEST(MittagLeffler, RejectsBadParameters) {
  EXPECT_THROW(ml_eval({0.0, 1.0}, 1.0), InvalidParams);
  EXPECT_THROW(ml_eval({-1.0, 1.0}, 1.0), InvalidParams);
  EXPECT_THROW(ml_eval({1.0, std::nan("")}, 1.0), InvalidParams);
  EXPECT_THROW(ml_eval({1.0, 1.0}, INFINITY), InvalidParams);
}

}  // namespace
}  // namespace mlpoisson
