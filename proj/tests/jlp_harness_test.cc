#include "fastjl/jlp_harness.h"

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "fastjl/errors.h"
#include "test_support.h"

namespace fastjl {
namespace {

double boost_tail(int dof, double eps) {
  const double k = dof;
  const double lower = eps >= 1.0 ? 0.0 : boost::math::gamma_p(k / 2.0, k * (1.0 - eps) / 2.0);
  return lower + boost::math::gamma_q(k / 2.0, k * (1.0 + eps) / 2.0);
}

TEST(Gamma, MatchesBoostOnAGrid) {
  for (double a : {0.5, 1.0, 2.5, 4.0, 32.0, 128.0})
    for (double x : {0.01, 0.5, 1.0, 3.0, 20.0, 100.0, 200.0})
      EXPECT_NEAR(regularized_gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12) << a << " " << x;
}

TEST(ChiSquareTail, FrozenValuesAgreeWithBoost) {
  EXPECT_NEAR(chi_square_two_sided_tail(64, 0.5), 0.0062016087682991265, 1e-13);
  EXPECT_NEAR(chi_square_two_sided_tail(8, 0.3), 0.5461280661316441, 1e-13);
  EXPECT_NEAR(boost_tail(64, 0.5), 0.0062016087682991265, 1e-13);
  EXPECT_NEAR(boost_tail(8, 0.3), 0.5461280661316441, 1e-13);
}

TEST(ChiSquareTailProperty, AgreesWithBoost) {
  testing::for_all(40, 51, [](testing::Gen& g) {
    const int dof = static_cast<int>(g.index(1, 400));
    const double eps = g.uniform(0.01, 1.5);
    EXPECT_NEAR(chi_square_two_sided_tail(dof, eps), boost_tail(dof, eps), 1e-11);
  });
}

TEST(ChiSquareTailProperty, DecreasesInEpsilon) {
  testing::for_all(30, 52, [](testing::Gen& g) {
    const int dof = static_cast<int>(g.index(1, 300));
    const double e1 = g.uniform(0.01, 1.0);
    const double e2 = e1 + g.uniform(0.001, 0.5);
    EXPECT_GE(chi_square_two_sided_tail(dof, e1), chi_square_two_sided_tail(dof, e2));
  });
}

TEST(Wilson, KnownInterval) {
  const WilsonInterval w = wilson_interval(5, 10);
  EXPECT_NEAR(w.lo, 0.23659309, 1e-8);
  EXPECT_NEAR(w.hi, 0.76340691, 1e-8);
  const WilsonInterval z = wilson_interval(0, 100);
  EXPECT_NEAR(z.lo, 0.0, 1e-15);
  EXPECT_GT(z.hi, 0.0);
}

TEST(WilsonProperty, ContainsThePointEstimate) {
  testing::for_all(50, 53, [](testing::Gen& g) {
    const std::uint64_t n = g.index(1, 100000);
    const std::uint64_t k = g.index(0, n);
    const WilsonInterval w = wilson_interval(k, n);
    const double p = static_cast<double>(k) / n;
    EXPECT_LE(w.lo, p + 1e-15);
    EXPECT_GE(w.hi, p - 1e-15);
    EXPECT_GE(w.lo, 0.0);
    EXPECT_LE(w.hi, 1.0);
  });
}

TEST(Bounds, Hoeffding) {
  EXPECT_NEAR(hoeffding_bound(0.1, 1000, 1), 4.122307244877116e-9, 1e-22);
  EXPECT_THROW(hoeffding_bound(0, 10, 1), RangeError);
  EXPECT_LE(serfling_bound(0.1, 100, 200, 1), hoeffding_bound(0.1, 100, 1));
  EXPECT_THROW(serfling_bound(0.1, 300, 200, 1), RangeError);
}

TEST(Families, Shapes) {
  BitSource src(1);
  const Vector spike = make_family_vector(VectorFamily::kSpike, 16, src);
  int halves = 0;
  for (double v : spike) {
    if (std::abs(v - 0.5) < 1e-15) ++halves;
    else EXPECT_EQ(v, 0.0);
  }
  EXPECT_EQ(halves, 4);
  const Vector basis = make_family_vector(VectorFamily::kBasis, 8, src);
  EXPECT_EQ(basis[0], 1.0);
  const Vector c = make_family_vector(VectorFamily::kConstant, 8, src);
  for (double v : c) EXPECT_NEAR(v, 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_EQ(src.gaussian_samples_consumed(), 0u);
  const Vector u = make_family_vector(VectorFamily::kRandomUnit, 32, src);
  EXPECT_NEAR(norm2(u), 1.0, 1e-12);
  for (auto f : {VectorFamily::kBasis, VectorFamily::kConstant, VectorFamily::kRandomUnit, VectorFamily::kSpike})
    EXPECT_EQ(parse_vector_family(to_string(f)), f);
}

TEST(Jlp, ReportIsIndependentOfWorkers) {
  const JlpReport a = jlp_failure_rate(TransformKind::kNewRademacher, 256, 8, 0.3, 400,
                                       VectorFamily::kRandomUnit, 9, {}, 1);
  const JlpReport b = jlp_failure_rate(TransformKind::kNewRademacher, 256, 8, 0.3, 400,
                                       VectorFamily::kRandomUnit, 9, {}, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.trials, 400u);
  EXPECT_LE(a.failure_ci.lo, a.failure_rate);
  EXPECT_GE(a.failure_ci.hi, a.failure_rate);
}

TEST(Jlp, DenseGaussianCarriesExactTailInsideItsInterval) {
  const JlpReport rep = jlp_failure_rate(TransformKind::kDenseGaussian, 64, 16, 0.4, 5000,
                                         VectorFamily::kBasis, 3);
  ASSERT_TRUE(rep.exact_failure_probability.has_value());
  EXPECT_NEAR(*rep.exact_failure_probability, boost_tail(16, 0.4), 1e-12);
  EXPECT_LE(rep.failure_ci.lo, *rep.exact_failure_probability);
  EXPECT_GE(rep.failure_ci.hi, *rep.exact_failure_probability);
  EXPECT_NEAR(rep.mean_squared_norm, 1.0, 0.03);
}

TEST(Jlp, NonDenseKindHasNoExactTail) {
  const JlpReport rep = jlp_failure_rate(TransformKind::kHashSparse, 64, 4, 0.5, 50,
                                         VectorFamily::kBasis, 3);
  EXPECT_FALSE(rep.exact_failure_probability.has_value());
}

TEST(InfinityNorm, HoeffdingThresholdHolds) {
  const TailCurve c = infinity_norm_check(256, 0.1, 2000, VectorFamily::kConstant, 4);
  EXPECT_LE(c.summary.at("hoeffding_exceedance"), 0.1);
  EXPECT_GT(c.summary.at("hoeffding_threshold"), c.summary.at("printed_threshold"));
  // Basis vectors map to flat vectors, so the sup norm is exactly n^{-1/2}.
  const TailCurve b = infinity_norm_check(256, 0.1, 50, VectorFamily::kBasis, 4);
  EXPECT_NEAR(b.max, 1.0 / 16.0, 1e-15);
}

TEST(BlockNorm, SingleBlockNeverDeviates) {
  const TailCurve c = block_norm_check(64, 1, 0.1, 200, 5);
  EXPECT_EQ(c.summary.at("exceedance_at_epsilon"), 0.0);
  EXPECT_LT(c.max, 1e-12);
}

TEST(BlockNorm, ExceedanceUnderOverlay) {
  const TailCurve c = block_norm_check(1024, 4, 0.5, 2000, 6);
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    if (c.bound.empty()) break;
    EXPECT_LE(c.ci_lo[i], std::min(1.0, c.bound[i])) << c.thresholds[i];
  }
}

TEST(BlockNonzero, NoFailuresAtHalf) {
  const TailCurve c = block_nonzero_check(1024, 4, 0.5, 2000, 7);
  EXPECT_TRUE(c.lower_tail);
  EXPECT_EQ(c.summary.at("failures_at_theta"), 0.0);
}

TEST(HansonWright, IdentityGaussianMoments) {
  const TailCurve c = hanson_wright_check(Matrix::Identity(64), 100000, QuadraticDistribution::kGaussian, 8);
  EXPECT_NEAR(c.summary.at("quadratic_mean"), 64.0, 0.5);
  EXPECT_NEAR(c.summary.at("quadratic_variance"), 128.0, 6.0);
}

TEST(HansonWright, OffDiagonalRademacherIsConstantMagnitude) {
  Matrix a(4, 4);
  a(0, 1) = a(1, 0) = 1.0;
  const TailCurve c = hanson_wright_check(a, 1000, QuadraticDistribution::kRademacher, 9);
  EXPECT_NEAR(c.mean, 2.0, 1e-12);
  EXPECT_NEAR(c.variance, 0.0, 1e-12);
}

TEST(HansonWright, FittedConstantsDominateTheExactTail) {
  const std::vector<double> etas{1, 2, 4, 8, 16, 32, 64};
  const HansonWrightConstants hw = fit_hanson_wright_constants(32, etas);
  ASSERT_GT(hw.c1, 0.0);
  const double frob = std::sqrt(32.0);
  for (double eta : etas) {
    const double exact = boost_tail(32, eta / 32.0);
    EXPECT_GE(hw_bound(eta, frob, 1.0, hw.c1, hw.c2) + 1e-12, exact) << eta;
  }
}

}  // namespace
}  // namespace fastjl
