#pragma once

#include "sicvpr/simdata.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sicvpr {

// Synthetic query-vs-reference scores with a known trajectory.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Derived draws are defined here rather than through
// <random> distributions so that matrices are identical across standard
// libraries:
//   uniform  u = (x >> 11) * 2^-53                     in [0, 1)
//   normal   Box-Muller on (1 - u1, u2), cosine branch first, sine cached
//   step     floor(3u) - 1                             in {-1, 0, 1}
// The trajectory stream is seeded with `seed`; technique i draws its scores
// from a stream seeded with seed + (i + 1) * 0x9E3779B97F4A7C15.
struct SynthConfig {
  Index q_count = 500;
  Index n_count = 500;
  double signal = 1.0;
  double noise_sigma = 0.5;
  // Probability that a query's true-match boost is omitted.
  double dropout = 0.0;
  // Dropout only applies to queries in [dropout_begin, dropout_end); a
  // negative end means "through the last query".
  Index dropout_begin = 0;
  Index dropout_end = -1;
  // Max |offset| of the true match from the diagonal.
  Index drift_amp = 0;
  Index allowance = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Per-technique overrides for multi-technique generation.
struct TechniqueProfile {
  std::string id;
  double signal = 1.0;
  double noise_sigma = 0.5;
  double dropout = 0.0;
  Index dropout_begin = 0;
  Index dropout_end = -1;
};

struct SynthData {
  SimilarityMatrix matrix;
  GroundTruth truth;
};

struct SynthSet {
  TechniqueSet techniques;
  GroundTruth truth;
};

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  int step();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Reference index of the true match for each query: a bounded random walk
// around the diagonal that stays inside [0, n_count).
GroundTruth generate_truth(const SynthConfig& config);

SimilarityMatrix generate_scores(const SynthConfig& config, const GroundTruth& truth,
                                 std::uint64_t stream_seed);

SynthData generate(const SynthConfig& config);

// All techniques share the trajectory of `base`; shape, drift, allowance and
// seed come from `base`, score statistics from each profile.
SynthSet generate_set(const SynthConfig& base, const std::vector<TechniqueProfile>& profiles);

std::uint64_t technique_stream_seed(std::uint64_t seed, std::size_t technique);

void write_config_echo(const SynthConfig& config, const std::filesystem::path& path);

}  // namespace sicvpr
