#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mlpoisson/distributions/generalized.hpp"
#include "mlpoisson/distributions/poisson.hpp"
#include "mlpoisson/distributions/standard.hpp"
#include "mlpoisson/errors.hpp"
#include "mlpoisson/numeric/compensated_sum.hpp"
#include "oracle_values.hpp"

namespace mlpoisson {
namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double sum_of(const std::vector<double>& v) {
  numeric::NeumaierSum s;
  for (double x : v) {
    s.add(x);
  }
  return s.value();
}

// E[K^n] by direct summation of a PMF table.
double summed_moment(const std::vector<double>& probs, unsigned n) {
  numeric::NeumaierSum s;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    s.add(std::pow(static_cast<double>(k), n) * probs[k]);
  }
  return s.value();
}

TEST(Generalized, ReducesToPoisson) {
  for (double lambda : {0.5, 5.0, 10.0}) {
    const GeneralizedPoisson d({lambda, 1.0, 1.0});
    for (std::size_t k = 0; k <= 40; ++k) {
      EXPECT_LT(rel_err(d.pmf(k), poisson_pmf(lambda, k)), 1e-12) << lambda << " k=" << k;
    }
  }
}

TEST(Generalized, ReferencePmfAndMoments) {
  const GfpdParams p{5.0, 0.755, 10.40};
  EXPECT_LT(rel_err(gfpd_pmf(p, 3), oracle::kGfpdPmf_5_0755_1040_k3), 1e-12);
  const MomentVector m = gfpd_raw_moments(p, 2);
  EXPECT_LT(rel_err(m.raw[1], oracle::kGfpdMu1_5_0755_1040), 1e-12);
  EXPECT_LT(rel_err(m.raw[2], oracle::kGfpdMu2_5_0755_1040), 1e-12);
  EXPECT_LT(rel_err(gfpd_raw_moments({5.0, 0.5, 0.5}, 6).raw[6], oracle::kGfpdMu6_5_05_05), 1e-10);
  EXPECT_LT(rel_err(gfpd_raw_moments({5.0, 1.5, 10.40}, 4).raw[4], oracle::kGfpdMu4_5_15_1040),
            1e-10);
}

TEST(Generalized, TablesAreNormalized) {
  for (double a : {0.3, 0.755, 1.0, 1.5, 1.9}) {
    for (double b : {0.2, 1.0, 4.0, 30.0}) {
      const PmfTable t = gfpd_pmf_table({5.0, a, b}, 1e-12);
      EXPECT_EQ(t.probs.size(), t.k_max + 1);
      EXPECT_NEAR(sum_of(t.probs) + t.tail_mass_bound, 1.0, 1e-13) << a << "," << b;
      EXPECT_LT(t.tail_mass_bound, 1e-12);
      for (double q : t.probs) {
        EXPECT_GE(q, 0.0);
      }
    }
  }
}

TEST(Generalized, ClosedFormMomentsMatchSummation) {
  for (double a : {0.5, 0.755, 1.0, 1.5}) {
    for (double b : {0.5, 1.0, 2.0, 10.40}) {
      const GfpdParams p{5.0, a, b};
      const PmfTable t = gfpd_pmf_table(p, 1e-12);
      const MomentVector m = gfpd_raw_moments(p, 6);
      EXPECT_DOUBLE_EQ(m.raw[0], 1.0);
      for (unsigned n = 1; n <= 6; ++n) {
        EXPECT_LT(rel_err(m.raw[n], summed_moment(t.probs, n)), 1e-8) << a << "," << b << " n=" << n;
      }
    }
  }
}

TEST(Generalized, PoissonMomentsAreBellPolynomials) {
  const MomentVector m = gfpd_raw_moments({3.0, 1.0, 1.0}, 10);
  for (unsigned n = 1; n <= 10; ++n) {
    EXPECT_LT(rel_err(m.raw[n], poisson_raw_moment(n, 3.0)), 1e-12) << "n=" << n;
  }
}

TEST(Generalized, MeanVarianceConsistentWithRawMoments) {
  for (double a : {0.4, 1.0, 1.7}) {
    for (double b : {0.5, 3.0}) {
      const GfpdParams p{5.0, a, b};
      const MeanVariance mv = gfpd_mean_variance(p);
      const MomentVector m = gfpd_raw_moments(p, 2);
      EXPECT_LT(rel_err(mv.mean, m.mean), 1e-10);
      EXPECT_LT(rel_err(mv.variance, m.raw[2] - m.raw[1] * m.raw[1]), 1e-10);
      EXPECT_LT(rel_err(mv.variance, m.variance), 1e-10);
    }
  }
}

TEST(Generalized, MomentOrderLimits) {
  const GeneralizedPoisson d({5.0, 1.0, 1.0});
  EXPECT_THROW(d.raw_moments(0), InvalidParams);
  EXPECT_THROW(d.raw_moments(21), InvalidParams);
  EXPECT_NO_THROW(d.raw_moments(20));
}

TEST(Generalized, LargeLambdaLimit) {
  for (auto [a, b] : {std::pair{1.0, 3.0}, std::pair{0.8, 2.0}}) {
    const GfpdParams p{1e6, a, b};
    const MeanVariance mv = gfpd_mean_variance(p);
    const MeanVariance lim = gfpd_asymptotic_moments(p, LambdaRegime::large_lambda);
    EXPECT_LT(rel_err(mv.mean, lim.mean), 1e-2) << a << "," << b;
    EXPECT_LT(rel_err(mv.variance, lim.variance), 1e-2) << a << "," << b;
  }
  EXPECT_NEAR(gfpd_asymptotic_moments({1e6, 1.0, 3.0}, LambdaRegime::large_lambda).mean, 999998.0,
              1e-6);
}

TEST(Generalized, LargeLambdaLimitIsApproachedFromModerateLambda) {
  const GfpdParams p10{10.0, 1.0, 3.0};
  const GfpdParams p100{100.0, 1.0, 3.0};
  const auto err = [](const GfpdParams& p) {
    return rel_err(gfpd_mean_variance(p).variance,
                   gfpd_asymptotic_moments(p, LambdaRegime::large_lambda).variance);
  };
  EXPECT_GT(err(p10), err(p100));
  EXPECT_LT(err(p10), 5e-2);
  EXPECT_LT(err(p100), 1e-6);
}

TEST(Generalized, SmallLambdaLimit) {
  double previous = 1.0;
  for (double lambda : {1e-2, 1e-3, 1e-4}) {
    const GfpdParams p{lambda, 0.5, 2.0};
    const double slope = std::tgamma(2.0) / std::tgamma(2.5);
    const double ratio = gfpd_mean_variance(p).mean / lambda;
    const double err = std::abs(ratio - slope);
    EXPECT_LT(err, previous);
    previous = err;
    EXPECT_NEAR(gfpd_asymptotic_moments(p, LambdaRegime::small_lambda).mean / lambda, slope, 1e-14);
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Generalized, BetaShiftMovesMeanNotVariance) {
  const MeanVariance b1 = gfpd_mean_variance({200.0, 1.2, 1.0});
  const MeanVariance b3 = gfpd_mean_variance({200.0, 1.2, 3.0});
  EXPECT_NEAR(b1.mean - b3.mean, 2.0 / 1.2, 1e-8);
  EXPECT_LT(rel_err(b3.variance, b1.variance), 1e-8);
}

TEST(Generalized, NegativeWeightsAreRejected) {
  const GfpdParams p{5.0, 0.7, -0.5};
  const ValidityReport r = gfpd_validity_check(p, 30);
  EXPECT_FALSE(r.valid);
  ASSERT_TRUE(r.first_negative_k.has_value());
  EXPECT_EQ(*r.first_negative_k, static_cast<std::size_t>(oracle::kFirstNegative_5_07_m05));
  try {
    GeneralizedPoisson d(p);
    FAIL() << "expected InvalidDistribution";
  } catch (const InvalidDistribution& e) {
    EXPECT_EQ(e.first_negative_k(), 0u);
  }
}

TEST(Generalized, PoleShiftedSupportIsValid) {
  // beta = -4, alpha = 1: the first four weights sit on gamma poles.
  const GeneralizedPoisson d({5.0, 1.0, -4.0});
  for (std::size_t k = 0; k <= 4; ++k) {
    EXPECT_EQ(d.pmf(k), 0.0);
  }
  EXPECT_GT(d.pmf(5), 0.0);
  const PmfTable t = d.pmf_table(1e-12);
  EXPECT_NEAR(sum_of(t.probs), 1.0, 1e-12);
}

TEST(Generalized, RejectsBadParameters) {
  EXPECT_THROW(GeneralizedPoisson({0.0, 1.0, 1.0}), InvalidParams);
  EXPECT_THROW(GeneralizedPoisson({1.0, 0.0, 1.0}), InvalidParams);
  EXPECT_THROW(GeneralizedPoisson({1.0, 1.0, NAN}), InvalidParams);
  EXPECT_THROW(gfpd_pmf_table({1.0, 1.0, 1.0}, 1e-2), InvalidParams);
}

TEST(Standard, ReducesToPoisson) {
  for (double lambda : {0.5, 5.0, 10.0}) {
    const auto probs = sfpd_pmf_range({1.0, 1.0, lambda}, 0, 40);
    for (std::size_t k = 0; k <= 40; ++k) {
      EXPECT_LT(rel_err(probs[k], poisson_pmf(lambda, k)), 1e-12) << lambda << " k=" << k;
    }
  }
}

TEST(Standard, ReferenceValues) {
  const struct {
    double alpha_s;
    std::size_t k;
    double p;
  } cases[] = {{0.5, 0, oracle::kSfpd_05_1_5_k0},   {0.5, 1, oracle::kSfpd_05_1_5_k1},
               {0.5, 3, oracle::kSfpd_05_1_5_k3},   {0.5, 10, oracle::kSfpd_05_1_5_k10},
               {0.5, 25, oracle::kSfpd_05_1_5_k25}, {0.2, 0, oracle::kSfpd_02_1_5_k0},
               {0.2, 2, oracle::kSfpd_02_1_5_k2},   {0.2, 7, oracle::kSfpd_02_1_5_k7},
               {0.2, 25, oracle::kSfpd_02_1_5_k25}, {0.9, 4, oracle::kSfpd_09_1_5_k4},
               {0.9, 12, oracle::kSfpd_09_1_5_k12}, {0.1, 0, oracle::kSfpd_01_1_5_k0},
               {0.1, 5, oracle::kSfpd_01_1_5_k5},   {0.1, 30, oracle::kSfpd_01_1_5_k30}};
  for (const auto& c : cases) {
    EXPECT_LT(rel_err(sfpd_pmf({c.alpha_s, 1.0, 5.0}, c.k), c.p), 1e-12)
        << c.alpha_s << " k=" << c.k;
  }
}

TEST(Standard, ZeroCountIsMittagLefflerAtNegativeArgument) {
  EXPECT_LT(rel_err(ml_eval({0.5, 1.0}, -std::sqrt(5.0)), oracle::kSfpd_05_1_5_k0), 1e-12);
}

TEST(Standard, TableIsANormalizedDistribution) {
  for (double a : {0.1, 0.5, 0.9}) {
    const PmfTable t = sfpd_pmf_table({a, 1.0, 5.0}, 1e-10);
    EXPECT_NEAR(sum_of(t.probs) + t.tail_mass_bound, 1.0, 1e-12) << a;
    for (double q : t.probs) {
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
    }
  }
}

TEST(Standard, ClosedFormMeanVariance) {
  const MeanVariance mv = sfpd_mean_variance({0.5, 1.0, 5.0});
  EXPECT_LT(rel_err(mv.mean, oracle::kSfpdMean_05_1_5), 1e-13);
  EXPECT_LT(rel_err(mv.variance, oracle::kSfpdVar_05_1_5), 1e-13);
  EXPECT_NEAR(sfpd_variance_factor(1.0), 1.0, 1e-12);
}

TEST(Standard, ClosedFormMatchesSummation) {
  for (double a : {0.5, 0.7, 0.9}) {
    const SfpdParams p{a, 1.0, 5.0};
    const PmfTable t = sfpd_pmf_table(p, 1e-12);
    const double m1 = summed_moment(t.probs, 1);
    const double var = summed_moment(t.probs, 2) - m1 * m1;
    const MeanVariance mv = sfpd_mean_variance(p);
    EXPECT_LT(rel_err(m1, mv.mean), 1e-5) << a;
    EXPECT_LT(rel_err(var, mv.variance), 1e-5) << a;
  }
}

TEST(Standard, NuScalesTheCompositeArgument) {
  // Only nu * lambda^alpha_s enters.
  const double a = 0.6;
  const auto p1 = sfpd_pmf_range({a, 2.0, 3.0}, 0, 10);
  const auto p2 = sfpd_pmf_range({a, 1.0, 3.0 * std::pow(2.0, 1.0 / a)}, 0, 10);
  for (std::size_t k = 0; k <= 10; ++k) {
    EXPECT_LT(rel_err(p1[k], p2[k]), 1e-12) << "k=" << k;
  }
}

TEST(Standard, RejectsBadParameters) {
  EXPECT_THROW(sfpd_pmf({1.2, 1.0, 5.0}, 0), InvalidParams);
  EXPECT_THROW(sfpd_pmf({0.0, 1.0, 5.0}, 0), InvalidParams);
  EXPECT_THROW(sfpd_pmf({0.5, 0.0, 5.0}, 0), InvalidParams);
  EXPECT_THROW(sfpd_pmf({0.5, 1.0, -5.0}, 0), InvalidParams);
  EXPECT_THROW(sfpd_pmf_range({0.5, 1.0, 5.0}, 3, 2), InvalidParams);
}

TEST(Standard, PrecisionEscalationIsBounded) {
  // Far in the cancelling regime even sixteen-fold precision cannot finish
  // within the term budget; the failure is reported, not a silent value.
  SeriesControl ctl;
  ctl.max_terms = 200;
  EXPECT_THROW(sfpd_pmf({0.05, 1.0, 1e4}, 0, ctl), Error);
}

}  // namespace
}  // namespace mlpoisson
