#pragma once

#include "sicvpr/scaling.hpp"
#include "sicvpr/sic.hpp"
#include "sicvpr/simdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sicvpr {

// Constant-velocity trajectory search parameters. Velocities are in
// reference frames per query frame.
struct SeqParams {
  Index ds = 20;
  double v_min = 0.8;
  double v_max = 1.2;
  double v_step = 0.1;
  Index r_window = 10;

  void validate() const;
  // v_min, v_min + v_step, ... up to v_max (inclusive, with 1e-9 slack).
  std::vector<double> velocities() const;
};

// Local contrast enhancement of one difference row: each element becomes
// (D - mean) / sigma over the +-r_window columns around it (clamped to the
// row). Windows with sigma below kZeroSpread yield 0.
template <typename InRow, typename OutRow>
void enhance_row(const Eigen::MatrixBase<InRow>& row, Index r_window,
                 Eigen::MatrixBase<OutRow> const& out_) {
  auto& out = const_cast<Eigen::MatrixBase<OutRow>&>(out_);
  const Index n = row.size();
  for (Index c = 0; c < n; ++c) {
    const Index lo = std::max<Index>(0, c - r_window);
    const Index hi = std::min<Index>(n - 1, c + r_window);
    const auto window = row.segment(lo, hi - lo + 1);
    const double mean = window.mean();
    const double sigma = std::sqrt((window.array() - mean).square().mean());
    out.coeffRef(c) = sigma >= kZeroSpread ? (row.coeff(c) - mean) / sigma : 0.0;
  }
}

template <typename Derived>
ScoreMatrix enhance_rows(const Eigen::MatrixBase<Derived>& differences, Index r_window) {
  ScoreMatrix out(differences.rows(), differences.cols());
  ScoreVector row;
  for (Index r = 0; r < differences.rows(); ++r) {
    row = differences.row(r);
    enhance_row(row, r_window, out.row(r));
  }
  return out;
}

// Contrast-enhanced difference matrix (lower is better). Similarity inputs are
// negated before enhancement.
ScoreMatrix contrast_enhance(const SimilarityMatrix& matrix, Index r_window);

namespace detail {

// Reference column offset for velocity v after f steps back. The offset is
// rounded half away from zero, then subtracted from the end column.
inline Index trajectory_offset(double v, Index f) {
  return static_cast<Index>(std::lround(v * static_cast<double>(f)));
}

template <typename RowAt>
ConsistencyResult trajectory_search_rows(RowAt&& row_at, Index cols, Index q,
                                         const SeqParams& params, WorkCounter* counter,
                                         ScoreVector& best, ScoreVector& sum) {
  const auto velocities = params.velocities();
  const Index depth = std::min(params.ds - 1, q);
  best.setConstant(cols, std::numeric_limits<double>::infinity());
  sum.resize(cols);
  for (const double v : velocities) {
    sum.setZero();
    for (Index f = 0; f <= depth; ++f) {
      const auto row = row_at(q - f);
      const Index off = trajectory_offset(v, f);
      for (Index r = 0; r < cols; ++r) {
        sum.coeffRef(r) += row.coeff(std::clamp<Index>(r - off, 0, cols - 1));
      }
      if (counter) counter->score_reads += static_cast<std::size_t>(cols);
    }
    best = best.cwiseMin(sum);
  }
  ConsistencyResult result;
  Index arg = 0;
  const double score = best.minCoeff(&arg);
  result.match_index = arg;
  result.theta = -score;
  return result;
}

}  // namespace detail

// Backward trajectory search ending at query q over an already enhanced
// difference matrix: score(r) = min_v sum_f D[q-f, r - round(v f)], the
// column clamped to the matrix. Returns argmin r with theta = -score.
template <typename Derived>
ConsistencyResult trajectory_search(const Eigen::MatrixBase<Derived>& enhanced, Index q,
                                    const SeqParams& params, WorkCounter* counter = nullptr) {
  params.validate();
  ScoreVector best;
  ScoreVector sum;
  return detail::trajectory_search_rows([&](Index r) { return enhanced.row(r); },
                                        enhanced.cols(), q, params, counter, best, sum);
}

ConsistencyResult seq_match(const SimilarityMatrix& matrix, Index q, const SeqParams& params);
std::vector<ConsistencyResult> seq_match_all(const SimilarityMatrix& matrix,
                                             const SeqParams& params);

// Online trajectory search keeping the last ds enhanced rows resident. Rows
// are raw similarity scores.
class SeqStream {
 public:
  SeqStream(Index cols, SeqParams params);

  ConsistencyResult push(const ScoreVector& similarity_row);
  // Enhanced difference of reference `n` in the most recent row.
  double latest_enhanced(Index n) const { return ring_.row(ring_.count() - 1)(n); }

 private:
  SeqParams params_;
  RowRing ring_;
  ScoreVector scratch_;
  ScoreVector best_;
  ScoreVector sum_;
};

}  // namespace sicvpr
