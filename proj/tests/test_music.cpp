#include "bridge.hpp"
#include "oracle.hpp"
#include "sicvpr/music.hpp"
#include "sicvpr/synth.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sicvpr;

namespace {

TechniqueSet random_set(std::mt19937_64& rng, std::size_t count, Index q, Index n) {
  std::vector<Technique> ts;
  for (std::size_t t = 0; t < count; ++t) {
    ts.push_back({"t" + std::to_string(t), SimilarityMatrix(oracle::random_matrix(rng, q, n))});
  }
  return TechniqueSet(std::move(ts));
}

}  // namespace

TEST(MusicMatch, ConstructedExample) {
  // A extends the SIC hand example (theta 1.6 at ref 1); B has a stronger
  // diagonal ending at ref 7 (0.8 + 1.2).
  ScoreMatrix a = ScoreMatrix::Zero(3, 8);
  a.row(1).head(4) << 0.7, 0.1, 0.6, 0.2;
  a.row(2).head(4) << 0.1, 0.9, 0.2, 0.8;
  ScoreMatrix b = ScoreMatrix::Zero(3, 8);
  b(1, 6) = 0.8;
  b(2, 7) = 1.2;
  const TechniqueSet set({{"A", SimilarityMatrix(a)}, {"B", SimilarityMatrix(b)}});
  const MusicMatcher matcher(set, false);
  const SicParams p{8, 1, 0};
  EXPECT_EQ(sic_match(a, 2, p).match_index, 1);
  EXPECT_DOUBLE_EQ(sic_match(a, 2, p).theta, 1.6);
  const auto d = matcher.match(2, p);
  EXPECT_EQ(d.technique_id, "B");
  EXPECT_EQ(d.technique, 1u);
  EXPECT_EQ(d.match_index, 7);
  EXPECT_DOUBLE_EQ(d.theta, 2.0);
  EXPECT_EQ(d.confidence, d.theta);
  const auto by_score = matcher.match(2, p, ConfidenceSource::kScore);
  EXPECT_EQ(by_score.confidence, 1.2);
}

TEST(MusicMatch, SingleTechniqueEqualsSic) {
  std::mt19937_64 rng(30);
  const auto set = random_set(rng, 1, 25, 18);
  const SicParams p{6, 4, 1};
  const auto run = music_match_all(set, p);
  const auto sic = sic_match_all(zscore_rows(set[0].matrix), p);
  for (std::size_t q = 0; q < sic.size(); ++q) {
    EXPECT_EQ(run.decisions[q].match_index, sic[q].match_index);
    EXPECT_EQ(run.decisions[q].theta, sic[q].theta);
    EXPECT_EQ(run.trace[q], "t0");
  }
}

TEST(MusicMatch, IdenticalTechniquesPickFirst) {
  std::mt19937_64 rng(31);
  const SimilarityMatrix m(oracle::random_matrix(rng, 20, 15));
  const TechniqueSet set({{"first", m}, {"second", m}});
  const SicParams p{5, 3, 1};
  for (Index q = 0; q < 20; ++q) {
    const auto d = music_match(set, q, p);
    EXPECT_EQ(d.technique_id, "first");
    EXPECT_EQ(d.match_index, sic_match(zscore_rows(m), q, p).match_index);
  }
}

TEST(MusicMatch, SwappingOrderOnlyAffectsTies) {
  std::mt19937_64 rng(32);
  const auto set = random_set(rng, 3, 30, 20);
  const TechniqueSet reversed({set[2], set[1], set[0]});
  const SicParams p{7, 5, 1};
  const auto a = music_match_all(set, p);
  const auto b = music_match_all(reversed, p);
  for (std::size_t q = 0; q < a.decisions.size(); ++q) {
    EXPECT_EQ(a.decisions[q].match_index, b.decisions[q].match_index);
    EXPECT_EQ(a.decisions[q].theta, b.decisions[q].theta);
    EXPECT_EQ(a.decisions[q].technique_id, b.decisions[q].technique_id);
  }
}

TEST(MusicMatch, ThetaIsMaxOverTechniques) {
  std::mt19937_64 rng(33);
  const auto set = random_set(rng, 4, 20, 16);
  const SicParams p{5, 3, 1};
  const MusicMatcher matcher(set);
  for (Index q = 0; q < 20; ++q) {
    double best = -1e300;
    for (std::size_t t = 0; t < set.size(); ++t) {
      best = std::max(best, sic_match(matcher.scaled(t), q, p).theta);
    }
    EXPECT_EQ(matcher.match(q, p).theta, best);
  }
}

TEST(MusicMatch, MatchesOracle) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = random_set(rng, 3, 12, 10);
    std::vector<oracle::Grid> raw;
    for (const auto& t : set) raw.push_back(oracle::to_grid(t.matrix.values()));
    const SicParams p{10, 3, 1};
    for (Index q = 0; q < 12; ++q) {
      const auto d = music_match(set, q, p);
      const auto want = oracle::music(raw, q, p.f, p.w);
      ASSERT_EQ(d.technique, want.technique);
      ASSERT_EQ(d.match_index, want.index);
      ASSERT_NEAR(d.theta, want.theta, 1e-12);
    }
  }
}

TEST(MusicMatch, AffineChangeOfOneTechniqueChangesNothing) {
  std::mt19937_64 rng(35);
  const auto set = random_set(rng, 2, 25, 20);
  const TechniqueSet moved({set[0], {"t1", SimilarityMatrix((set[1].matrix.values().array() * 7.5 - 3.0).matrix())}});
  const SicParams p{6, 5, 1};
  const auto a = music_match_all(set, p);
  const auto b = music_match_all(moved, p);
  for (std::size_t q = 0; q < a.decisions.size(); ++q) {
    EXPECT_EQ(a.decisions[q].match_index, b.decisions[q].match_index);
    EXPECT_EQ(a.decisions[q].technique, b.decisions[q].technique);
  }
}

TEST(MusicMatch, PerfectTechniqueBeatsNoise) {
  const SicParams p{20, 10, 1};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthConfig base;
    base.q_count = 120;
    base.n_count = 120;
    base.drift_amp = 1;
    base.seed = seed;
    const auto data = generate_set(base, {{"good", 1.0, 0.0, 0.0, 0, -1},
                                          {"noise", 1.0, 0.5, 1.0, 0, -1}});
    const auto run = music_match_all(data.techniques, p);
    Index chosen = 0;
    for (Index q = p.f; q < base.q_count; ++q) chosen += run.trace[static_cast<std::size_t>(q)] == "good";
    EXPECT_GE(static_cast<double>(chosen), 0.95 * static_cast<double>(base.q_count - p.f)) << seed;
  }
}

TEST(MusicStream, EqualsBatch) {
  std::mt19937_64 rng(36);
  const auto set = random_set(rng, 3, 40, 25);
  const SicParams p{6, 6, 1};
  const auto batch = music_match_all(set, p);
  MusicStream stream({"t0", "t1", "t2"}, 25, p);
  for (Index q = 0; q < 40; ++q) {
    std::vector<ScoreVector> rows;
    for (const auto& t : set) rows.push_back(t.matrix.values().row(q));
    const auto d = stream.push(rows);
    const auto& b = batch.decisions[static_cast<std::size_t>(q)];
    ASSERT_EQ(d.query, q);
    ASSERT_EQ(d.technique_id, b.technique_id);
    ASSERT_EQ(d.match_index, b.match_index);
    ASSERT_EQ(d.theta, b.theta);
  }
}

TEST(MusicMatch, EmptySetRejected) {
  EXPECT_THROW(MusicMatcher{TechniqueSet{}}, ConfigError);
}
