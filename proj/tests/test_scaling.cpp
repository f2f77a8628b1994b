#include "bridge.hpp"
#include "sicvpr/scaling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sicvpr;

TEST(ZscoreRows, KnownRow) {
  ScoreMatrix m(1, 3);
  m << 1, 2, 3;
  const auto z = zscore_rows(m);
  // mean 2, population sigma sqrt(2/3)
  const double e = 1.0 / std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(z(0, 0), -e, 1e-12);
  EXPECT_NEAR(z(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(z(0, 2), e, 1e-12);
  EXPECT_NEAR(e, 1.224744871, 1e-9);
}

TEST(ZscoreRows, FlatRowIsZero) {
  ScoreMatrix m(2, 3);
  m << 5, 5, 5, 0.1, 0.1, 0.1;
  EXPECT_TRUE(zscore_rows(m).isZero(0.0));
  ScoreMatrix single(1, 1);
  single << 42;
  EXPECT_EQ(zscore_rows(single)(0, 0), 0.0);
}

TEST(ZscoreRows, NormalizedRowIsFixedPoint) {
  ScoreMatrix m(1, 3);
  const double e = 1.0 / std::sqrt(2.0 / 3.0);
  m << -e, 0, e;
  EXPECT_TRUE(zscore_rows(m).isApprox(m, 1e-12));
}

TEST(ZscoreRows, MeanZeroSigmaOne) {
  std::mt19937_64 rng(2);
  const ScoreMatrix m = oracle::random_matrix(rng, 30, 57) * 13.0;
  const auto z = zscore_rows(m);
  for (Index r = 0; r < z.rows(); ++r) {
    const double mean = z.row(r).mean();
    const double sigma = std::sqrt((z.row(r).array() - mean).square().mean());
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_LT(std::abs(sigma - 1.0), 1e-9);
  }
}

TEST(ZscoreRows, MatchesOracle) {
  std::mt19937_64 rng(4);
  const ScoreMatrix m = oracle::random_matrix(rng, 10, 33);
  const auto z = oracle::zscore(oracle::to_grid(m));
  const auto got = zscore_rows(m);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      EXPECT_NEAR(got(r, c), z[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], 1e-12);
    }
  }
}

TEST(ZscoreRows, AffineInvariance) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ScoreMatrix m = oracle::random_matrix(rng, 5, 40);
    const double a = scale(rng);
    const double b = shift(rng);
    const ScoreMatrix moved = (a * m.array() + b).matrix();
    EXPECT_LT((zscore_rows(moved) - zscore_rows(m)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ZscoreRows, ArgmaxPreservedAndIdempotent) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const ScoreMatrix m = oracle::random_matrix(rng, 6, 25);
    const auto z = zscore_rows(m);
    for (Index r = 0; r < m.rows(); ++r) {
      Index a = 0;
      Index b = 0;
      m.row(r).maxCoeff(&a);
      z.row(r).maxCoeff(&b);
      EXPECT_EQ(a, b);
    }
    EXPECT_LT((zscore_rows(z) - z).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ZscoreRow, FloatScalarAndAliasing) {
  ScoreVectorT<float> row(4);
  row << 1.f, 2.f, 3.f, 4.f;
  zscore_row(row, row);
  EXPECT_NEAR(row.mean(), 0.f, 1e-6f);
  EXPECT_NEAR(row(3), 1.3416408f, 1e-5f);
}
