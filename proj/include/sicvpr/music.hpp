#pragma once

#include "sicvpr/sic.hpp"
#include "sicvpr/simdata.hpp"

#include <string>
#include <vector>

namespace sicvpr {

// What a decision reports as its PR-thresholding confidence: the winning
// theta, or the (scaled) single-frame score of the chosen reference.
enum class ConfidenceSource { kTheta, kScore };

struct MatchDecision {
  Index query = 0;
  std::size_t technique = 0;
  std::string technique_id;
  Index match_index = 0;
  double theta = 0.0;
  double confidence = 0.0;
};

// Technique chosen for each query, in query order.
using SelectionTrace = std::vector<std::string>;

struct MusicRun {
  std::vector<MatchDecision> decisions;
  SelectionTrace trace;
};

// Runs SIC on every technique and keeps the match with the largest theta.
// Scaled matrices are computed once at construction.
class MusicMatcher {
 public:
  explicit MusicMatcher(const TechniqueSet& techniques, bool scale = true);

  MatchDecision match(Index q, const SicParams& params,
                      ConfidenceSource confidence = ConfidenceSource::kTheta) const;
  MusicRun match_all(const SicParams& params,
                     ConfidenceSource confidence = ConfidenceSource::kTheta) const;

  const ScaledMatrix& scaled(std::size_t technique) const { return scaled_[technique]; }
  std::size_t size() const { return ids_.size(); }
  Index rows() const { return scaled_.front().rows(); }

 private:
  std::vector<std::string> ids_;
  std::vector<ScaledMatrix> scaled_;
};

MatchDecision music_match(const TechniqueSet& techniques, Index q, const SicParams& params);
MusicRun music_match_all(const TechniqueSet& techniques, const SicParams& params);

// Online MuSIC over per-technique row streams of equal width.
class MusicStream {
 public:
  MusicStream(std::vector<std::string> ids, Index cols, const SicParams& params, bool scale = true);

  // One row per technique, in the order the ids were given.
  MatchDecision push(const std::vector<ScoreVector>& rows,
                     ConfidenceSource confidence = ConfidenceSource::kTheta);

 private:
  std::vector<std::string> ids_;
  std::vector<SicStream> streams_;
};

}  // namespace sicvpr
