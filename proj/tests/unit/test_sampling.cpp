#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ggmlab/linalg.hpp"
#include "ggmlab/sampling.hpp"
#include "support/generators.hpp"

namespace ggmlab {
namespace {

TEST(SampleGaussian, IdentityCovarianceAtLargeM) {
  const Matrix x = sample_gaussian(Matrix::Identity(3, 3), 100000, 5);
  const Matrix s = sample_covariance(x);
  EXPECT_LT((s - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SampleGaussian, ScaledPrecisionVariance) {
  const Matrix theta = 4.0 * Matrix::Identity(2, 2);
  const Matrix s = sample_covariance(sample_gaussian(theta, 100000, 6));
  EXPECT_NEAR(s(0, 0), 0.25, 0.01);
  EXPECT_NEAR(s(1, 1), 0.25, 0.01);
}

TEST(SampleGaussian, SameSeedSameDraw) {
  Rng rng(1);
  const Matrix theta = testing::random_pd(4, rng);
  EXPECT_EQ(sample_gaussian(theta, 20, 77), sample_gaussian(theta, 20, 77));
}

TEST(SampleGaussian, RejectsNonPd) {
  Matrix theta(2, 2);
  theta << 1, 2, 2, 1;
  EXPECT_THROW(sample_gaussian(theta, 5, 0), LinalgError);
  EXPECT_THROW(sample_gaussian(Matrix::Identity(2, 2), 0, 0), ParameterError);
}

TEST(SampleGaussian, ConvergesAtExpectedRate) {
  Rng rng(12);
  const Matrix theta = testing::random_pd(4, rng, 1.0);
  const Matrix sigma = theta.inverse();
  // Error scales as m^{-1/2}: a 10x larger m should cut it by about 3.16x.
  // Averaged over seeds so a single unlucky draw does not decide the check.
  double err4 = 0.0;
  double err5 = 0.0;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    err4 += (sample_covariance(sample_gaussian(theta, 10000, seed)) - sigma).norm();
    err5 += (sample_covariance(sample_gaussian(theta, 100000, 100 + seed)) - sigma).norm();
  }
  EXPECT_LT(err5, err4 / 2.5);
  EXPECT_GT(err5, err4 / 4.0);
}

TEST(SampleCovariance, DirectFormula) {
  Matrix x(2, 2);
  x << 1, -1, 2, -2;
  Matrix expected(2, 2);
  expected << 1, 2, 2, 4;
  EXPECT_LT((sample_covariance(x) - expected).norm(), 1e-15);
  EXPECT_EQ(sample_covariance(Matrix::Zero(3, 4)).norm(), 0.0);
}

TEST(SampleCovariance, MatchesColumnSumOracle) {
  Rng rng(2);
  const Matrix x = testing::gaussian(3, 50, rng);
  Matrix oracle = Matrix::Zero(3, 3);
  for (int k = 0; k < 50; ++k) oracle += x.col(k) * x.col(k).transpose();
  oracle /= 50.0;
  EXPECT_LT((sample_covariance(x) - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleCovariance, CenteringRemovesMean) {
  Matrix x(1, 4);
  x << 1, 2, 3, 4;
  EXPECT_NEAR(sample_covariance(x, true)(0, 0), 1.25, 1e-15);
  EXPECT_NEAR(sample_covariance(x, false)(0, 0), 7.5, 1e-15);
}

TEST(ExternalSummary, ZeroNoiseIsExact) {
  Rng rng(3);
  const Matrix l2 = testing::random_pd(3, rng);
  const ExternalSummary s = make_external_summary(l2, 0.0, 1);
  EXPECT_EQ(s.theta2_hat, s.l2_hat);
  EXPECT_TRUE(std::isinf(s.snr));
}

TEST(ExternalSummary, SnrFormula) {
  const Matrix l2 = Matrix::Identity(4, 4);  // ||I_4||_F = 2
  const ExternalSummary s = make_external_summary(l2, 1.0, 1);
  EXPECT_DOUBLE_EQ(s.snr, 4.0);
  EXPECT_NEAR(s.snr_db(), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(sigma_for_snr(l2, 4.0), 1.0, 1e-15);
}

TEST(ExternalSummary, NoiseModel) {
  Rng rng(4);
  const Matrix l2 = testing::random_pd(3, rng);
  const ExternalSummary s = make_external_summary(l2, 2.0, 9);
  EXPECT_LT((s.theta2_hat - (l2 + 4.0 * gram_noise(3, 9))).norm(), 1e-13);
}

TEST(ExternalSummary, RemainsPdUnderHeavyNoise) {
  Rng rng(5);
  const Matrix l2 = testing::random_pd(5, rng);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ExternalSummary s = make_external_summary(l2, 10.0, seed);
    ASSERT_TRUE(is_positive_definite(s.theta2_hat)) << seed;
    ASSERT_LT((s.theta2_hat - s.theta2_hat.transpose()).norm(), 1e-12);
  }
}

TEST(ExternalSummary, RejectsIndefiniteBase) {
  Matrix l2(2, 2);
  l2 << 1, 0, 0, -1;
  EXPECT_THROW(make_external_summary(l2, 0.0, 0), DegenerateSummaryError);
  EXPECT_THROW(make_external_summary(Matrix::Identity(2, 2), -1.0, 0), ParameterError);
}

TEST(GramNoise, PsdForEverySeed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n2 = 1 + static_cast<int>(seed % 7);
    ASSERT_GE(min_eigenvalue(gram_noise(n2, seed)), -1e-12) << seed;
  }
}

TEST(SummaryBase, BlockAndMarginal) {
  Rng rng(6);
  const Matrix theta = testing::random_pd(5, rng);
  const PartitionedPrecision pp = split_precision(theta, 2);
  EXPECT_EQ(summary_base(pp, SummaryBase::kPrecisionBlock), pp.theta2);
  const Matrix marginal = summary_base(pp, SummaryBase::kMarginalPrecision);
  const Matrix oracle = theta.inverse().bottomRightCorner(3, 3).inverse();
  EXPECT_LT((marginal - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
}  // namespace ggmlab
