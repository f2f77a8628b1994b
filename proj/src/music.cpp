#include "sicvpr/music.hpp"

namespace sicvpr {

namespace {

// Earliest technique wins exact theta ties; within one technique SIC has
// already resolved ties by reference index.
bool beats(const ConsistencyResult& candidate, const ConsistencyResult& best) {
  return candidate.theta > best.theta;
}

}  // namespace

MusicMatcher::MusicMatcher(const TechniqueSet& techniques, bool scale) {
  if (techniques.empty()) throw ConfigError("MuSIC needs at least one technique");
  for (const auto& t : techniques) {
    ids_.push_back(t.id);
    scaled_.push_back(scale ? zscore_rows(t.matrix) : t.matrix.values());
  }
}

MatchDecision MusicMatcher::match(Index q, const SicParams& params,
                                  ConfidenceSource confidence) const {
  params.validate();
  if (q < 0 || q >= rows()) throw ConfigError("query index out of range");
  MatchDecision decision;
  decision.query = q;
  ConsistencyResult best;
  std::vector<Index> candidates;
  for (std::size_t t = 0; t < scaled_.size(); ++t) {
    top_k_candidates(scaled_[t].row(q), params.k, candidates);
    auto result = sic_evaluate(scaled_[t], q, candidates, params);
    if (t == 0 || beats(result, best)) {
      best = std::move(result);
      decision.technique = t;
    }
  }
  decision.technique_id = ids_[decision.technique];
  decision.match_index = best.match_index;
  decision.theta = best.theta;
  decision.confidence = confidence == ConfidenceSource::kTheta
                            ? best.theta
                            : scaled_[decision.technique](q, best.match_index);
  return decision;
}

MusicRun MusicMatcher::match_all(const SicParams& params, ConfidenceSource confidence) const {
  MusicRun run;
  run.decisions.reserve(static_cast<std::size_t>(rows()));
  for (Index q = 0; q < rows(); ++q) {
    run.decisions.push_back(match(q, params, confidence));
    run.trace.push_back(run.decisions.back().technique_id);
  }
  return run;
}

MatchDecision music_match(const TechniqueSet& techniques, Index q, const SicParams& params) {
  return MusicMatcher(techniques).match(q, params);
}

MusicRun music_match_all(const TechniqueSet& techniques, const SicParams& params) {
  return MusicMatcher(techniques).match_all(params);
}

MusicStream::MusicStream(std::vector<std::string> ids, Index cols, const SicParams& params,
                         bool scale)
    : ids_(std::move(ids)) {
  if (ids_.empty()) throw ConfigError("MuSIC needs at least one technique");
  for (std::size_t i = 0; i < ids_.size(); ++i) streams_.emplace_back(cols, params, scale);
}

MatchDecision MusicStream::push(const std::vector<ScoreVector>& rows,
                                ConfidenceSource confidence) {
  if (rows.size() != streams_.size()) throw ConfigError("one row per technique required");
  MatchDecision decision;
  ConsistencyResult best;
  for (std::size_t t = 0; t < streams_.size(); ++t) {
    auto result = streams_[t].push(rows[t]);
    if (t == 0 || beats(result, best)) {
      best = std::move(result);
      decision.technique = t;
    }
  }
  decision.query = streams_.front().count() - 1;
  decision.technique_id = ids_[decision.technique];
  decision.match_index = best.match_index;
  decision.theta = best.theta;
  decision.confidence = confidence == ConfidenceSource::kTheta
                            ? best.theta
                            : streams_[decision.technique].latest_score(best.match_index);
  return decision;
}

}  // namespace sicvpr
