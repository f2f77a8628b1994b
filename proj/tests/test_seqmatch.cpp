#include "bridge.hpp"
#include "sicvpr/seqmatch.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sicvpr;

TEST(SeqParams, VelocitiesAndValidation) {
  const SeqParams p;
  ASSERT_EQ(p.velocities().size(), 5u);
  EXPECT_NEAR(p.velocities().back(), 1.2, 1e-12);
  EXPECT_THROW((SeqParams{0, 1, 1, 0.1, 1}.validate()), ConfigError);
  EXPECT_THROW((SeqParams{5, 0, 1, 0.1, 1}.validate()), ConfigError);
  EXPECT_THROW((SeqParams{5, 1.2, 1, 0.1, 1}.validate()), ConfigError);
  EXPECT_THROW((SeqParams{5, 1, 1, 0, 1}.validate()), ConfigError);
  EXPECT_THROW((SeqParams{5, 1, 1, 0.1, 0}.validate()), ConfigError);
}

TEST(ContrastEnhance, ConstantMatrixIsZero) {
  const SimilarityMatrix m(ScoreMatrix::Constant(4, 30, 0.1));
  EXPECT_TRUE(contrast_enhance(m, 10).isZero(0.0));
}

TEST(ContrastEnhance, SignFollowsDeviationFromWindowMean) {
  ScoreMatrix d = ScoreMatrix::Constant(1, 21, 2.0);
  d(0, 10) = 5.0;
  const auto up = contrast_enhance(SimilarityMatrix(d, Orientation::kDistance), 3);
  EXPECT_GT(up(0, 10), 0.0);
  d(0, 10) = -1.0;
  const auto down = contrast_enhance(SimilarityMatrix(d, Orientation::kDistance), 3);
  EXPECT_LT(down(0, 10), 0.0);
}

TEST(ContrastEnhance, FullWindowReducesToZscore) {
  std::mt19937_64 rng(40);
  const ScoreMatrix d = oracle::random_matrix(rng, 50, 50);
  const auto e = contrast_enhance(SimilarityMatrix(d, Orientation::kDistance), 50);
  EXPECT_LT((e - zscore_rows(d)).cwiseAbs().maxCoeff(), 1e-9);
  for (Index r = 0; r < e.rows(); ++r) EXPECT_LT(std::abs(e.row(r).mean()), 1e-9);
}

TEST(ContrastEnhance, SimilarityIsNegatedFirst) {
  std::mt19937_64 rng(41);
  const ScoreMatrix s = oracle::random_matrix(rng, 5, 40);
  const auto a = contrast_enhance(SimilarityMatrix(s), 6);
  const auto b = contrast_enhance(SimilarityMatrix(ScoreMatrix(-s), Orientation::kDistance), 6);
  EXPECT_TRUE(a == b);
}

TEST(TrajectorySearch, PerfectDiagonal) {
  const Index n = 40;
  ScoreMatrix d = ScoreMatrix::Ones(n, n);
  d.diagonal().setZero();
  SeqParams p;
  p.ds = 10;
  for (Index q = p.ds; q < n; ++q) {
    const auto r = trajectory_search(d, q, p);
    EXPECT_EQ(r.match_index, q);
    EXPECT_EQ(r.theta, 0.0);
    EXPECT_EQ(seq_match(SimilarityMatrix(d, Orientation::kDistance), q, p).match_index, q);
  }
}

TEST(TrajectorySearch, UnitVelocityOnHandExample) {
  ScoreMatrix s(3, 4);
  s << 0.0, 0.0, 0.0, 0.0,
       0.7, 0.1, 0.6, 0.2,
       0.1, 0.9, 0.2, 0.8;
  const SeqParams p{2, 1.0, 1.0, 0.1, 1};
  // Lower is better, so feed the negated similarities.
  const auto r = trajectory_search(ScoreMatrix(-s), 2, p);
  EXPECT_EQ(r.match_index, 1);
  EXPECT_DOUBLE_EQ(r.theta, 1.6);
}

TEST(SeqMatch, SingleFrameIsArgminOfEnhancedRow) {
  std::mt19937_64 rng(42);
  const SimilarityMatrix m(oracle::random_matrix(rng, 12, 60));
  SeqParams p;
  p.ds = 1;
  const auto e = contrast_enhance(m, p.r_window);
  for (Index q = 0; q < m.rows(); ++q) {
    Index arg = 0;
    e.row(q).minCoeff(&arg);
    EXPECT_EQ(seq_match(m, q, p).match_index, arg);
  }
}

TEST(SeqMatch, ReadCountIsLinearInMapSize) {
  std::mt19937_64 rng(43);
  const SeqParams p;
  for (Index n : {50, 400}) {
    const ScoreMatrix e = oracle::random_matrix(rng, 30, n);
    for (Index q : {0, 5, 29}) {
      WorkCounter counter;
      trajectory_search(e, q, p, &counter);
      EXPECT_EQ(counter.score_reads,
                static_cast<std::size_t>(n * 5 * std::min<Index>(p.ds, q + 1)));
    }
  }
}

TEST(SeqStream, EqualsBatch) {
  std::mt19937_64 rng(44);
  const SimilarityMatrix m(oracle::random_matrix(rng, 35, 45));
  SeqParams p;
  p.ds = 8;
  p.r_window = 5;
  const auto batch = seq_match_all(m, p);
  const auto e = contrast_enhance(m, p.r_window);
  SeqStream stream(45, p);
  for (Index q = 0; q < m.rows(); ++q) {
    const auto r = stream.push(m.values().row(q));
    ASSERT_EQ(r.match_index, batch[static_cast<std::size_t>(q)].match_index);
    ASSERT_EQ(r.theta, batch[static_cast<std::size_t>(q)].theta);
    ASSERT_EQ(stream.latest_enhanced(3), e(q, 3));
  }
}
