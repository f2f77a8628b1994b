#include "sicvpr/seqmatch.hpp"

#include <string>

namespace sicvpr {

void SeqParams::validate() const {
  if (ds < 1) throw ConfigError("ds must be at least 1");
  if (!(v_min > 0.0) || !(v_max >= v_min)) throw ConfigError("velocities need 0 < v_min <= v_max");
  if (!(v_step > 0.0)) throw ConfigError("v_step must be positive");
  if (r_window < 1) throw ConfigError("r_window must be at least 1");
}

std::vector<double> SeqParams::velocities() const {
  const auto steps = static_cast<Index>(std::floor((v_max - v_min) / v_step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps + 1));
  for (Index i = 0; i <= steps; ++i) out.push_back(v_min + static_cast<double>(i) * v_step);
  return out;
}

ScoreMatrix contrast_enhance(const SimilarityMatrix& matrix, Index r_window) {
  if (r_window < 1) throw ConfigError("r_window must be at least 1");
  if (matrix.orientation() == Orientation::kSimilarity) {
    return enhance_rows(-matrix.values(), r_window);
  }
  return enhance_rows(matrix.values(), r_window);
}

ConsistencyResult seq_match(const SimilarityMatrix& matrix, Index q, const SeqParams& params) {
  params.validate();
  if (q < 0 || q >= matrix.rows()) throw ConfigError("query index out of range");
  // Only the rows the trajectory touches are enhanced.
  const Index first = std::max<Index>(0, q - params.ds + 1);
  const SimilarityMatrix window(matrix.values().middleRows(first, q - first + 1),
                                matrix.orientation());
  return trajectory_search(contrast_enhance(window, params.r_window), q - first, params);
}

std::vector<ConsistencyResult> seq_match_all(const SimilarityMatrix& matrix,
                                             const SeqParams& params) {
  params.validate();
  const ScoreMatrix enhanced = contrast_enhance(matrix, params.r_window);
  std::vector<ConsistencyResult> results;
  results.reserve(static_cast<std::size_t>(matrix.rows()));
  for (Index q = 0; q < matrix.rows(); ++q) results.push_back(trajectory_search(enhanced, q, params));
  return results;
}

SeqStream::SeqStream(Index cols, SeqParams params)
    : params_(params), ring_((params.validate(), params.ds), cols) {}

ConsistencyResult SeqStream::push(const ScoreVector& similarity_row) {
  scratch_ = -similarity_row;
  const Index q = ring_.push(scratch_);
  enhance_row(scratch_, params_.r_window, ring_.mutable_row(q));
  return detail::trajectory_search_rows([this](Index r) { return ring_.row(r); }, ring_.cols(), q,
                                        params_, nullptr, best_, sum_);
}

}  // namespace sicvpr
