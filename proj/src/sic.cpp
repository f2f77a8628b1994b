#include "sicvpr/sic.hpp"

#include <string>

namespace sicvpr {

void SicParams::validate() const {
  if (k < 1) throw ConfigError("K must be at least 1, got " + std::to_string(k));
  if (f < 0) throw ConfigError("F must be non-negative, got " + std::to_string(f));
  if (w < 0) throw ConfigError("W must be non-negative, got " + std::to_string(w));
}

RowRing::RowRing(Index capacity, Index cols) : rows_(capacity, cols) {
  if (capacity < 1 || cols < 1) throw ConfigError("row ring needs positive capacity and width");
}

Index RowRing::push(const ScoreVector& row) {
  if (row.size() != rows_.cols()) {
    throw ConfigError("row has " + std::to_string(row.size()) + " columns, expected " +
                      std::to_string(rows_.cols()));
  }
  rows_.row(count_ % rows_.rows()) = row;
  return count_++;
}

DiagonalHistory::DiagonalHistory(Index cols, Index lags)
    : cols_(cols), lags_(lags), cells_(static_cast<std::size_t>(cols * lags)) {
  if (cols < 1 || lags < 1) throw ConfigError("history needs positive width and depth");
}

Index DiagonalHistory::diagonal(Index d) const {
  d %= cols_;
  return d < 0 ? d + cols_ : d;
}

Index DiagonalHistory::push(const ScoreVector& row) {
  if (row.size() != cols_) {
    throw ConfigError("row has " + std::to_string(row.size()) + " columns, expected " +
                      std::to_string(cols_));
  }
  const Index r = count_++;
  const Index slot = r % lags_;
  Index d = diagonal(-r);
  for (Index j = 0; j < cols_; ++j, ++d) {
    if (d == cols_) d = 0;
    cells_[static_cast<std::size_t>(d * lags_ + slot)] = row(j);
  }
  return r;
}

double DiagonalHistory::at(Index q, Index j) const {
  return cells_[static_cast<std::size_t>(diagonal(j - q) * lags_ + q % lags_)];
}

double DiagonalHistory::theta(Index q, Index k, const SicParams& params,
                              WorkCounter* counter) const {
  const Index depth = std::min(params.f, q);
  if (depth >= lags_ || q >= count_ || q < count_ - lags_) {
    throw ConfigError("query rows are no longer resident");
  }
  // Row q - f holds column k - f + delta on diagonal k - q + delta.
  const Index q_slot = q % lags_;
  const Index d_first = diagonal(k - q - params.w);
  double sum = 0.0;
  for (Index f = 0; f <= depth; ++f) {
    const Index lo = std::max(-params.w, f - k);
    const Index hi = std::min(params.w, cols_ - 1 - k + f);
    if (hi < lo) continue;
    const Index slot = q_slot >= f ? q_slot - f : q_slot - f + lags_;
    Index d = d_first + (lo + params.w);
    while (d >= cols_) d -= cols_;
    double best = cells_[static_cast<std::size_t>(d * lags_ + slot)];
    for (Index delta = lo + 1; delta <= hi; ++delta) {
      if (++d == cols_) d = 0;
      best = std::max(best, cells_[static_cast<std::size_t>(d * lags_ + slot)]);
    }
    sum += best;
    if (counter) counter->score_reads += static_cast<std::size_t>(hi - lo + 1);
  }
  return sum;
}

ConsistencyResult DiagonalHistory::evaluate(Index q, const std::vector<Index>& candidates,
                                            const SicParams& params, WorkCounter* counter) const {
  ConsistencyResult result;
  result.candidates.reserve(candidates.size());
  // A candidate's cells are one contiguous run of (2W+1) * lags values unless
  // it wraps; fetching a few candidates ahead hides the misses on large maps.
  constexpr std::size_t kAhead = 4;
  const auto prefetch = [&](Index k) {
    const Index d = diagonal(k - q - params.w);
    const std::size_t begin = static_cast<std::size_t>(d * lags_);
    const std::size_t span = static_cast<std::size_t>((2 * params.w + 1) * lags_);
    const std::size_t end = std::min(begin + span, cells_.size());
    for (std::size_t i = begin; i < end; i += 8) __builtin_prefetch(&cells_[i]);
  };
  for (std::size_t i = 0; i < std::min(kAhead, candidates.size()); ++i) prefetch(candidates[i]);
  bool first = true;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i + kAhead < candidates.size()) prefetch(candidates[i + kAhead]);
    const Index k = candidates[i];
    const double t = theta(q, k, params, counter);
    result.candidates.push_back({k, t});
    if (first || t > result.theta || (t == result.theta && k < result.match_index)) {
      result.theta = t;
      result.match_index = k;
      first = false;
    }
  }
  return result;
}

SicStream::SicStream(Index cols, SicParams params, bool scale)
    : params_(params), scale_(scale), history_(cols, (params.validate(), params.f + 1)) {}

const std::vector<Index>& SicStream::ingest(const ScoreVector& raw_row) {
  latest_ = raw_row;
  if (scale_) zscore_row(latest_, latest_);
  history_.push(latest_);
  top_k_candidates(latest_, params_.k, candidates_);
  return candidates_;
}

ConsistencyResult SicStream::score(WorkCounter* counter) const {
  if (history_.count() == 0) throw ConfigError("no row ingested yet");
  return history_.evaluate(history_.count() - 1, candidates_, params_, counter);
}

ConsistencyResult SicStream::push(const ScoreVector& raw_row, WorkCounter* counter) {
  ingest(raw_row);
  return score(counter);
}

}  // namespace sicvpr
