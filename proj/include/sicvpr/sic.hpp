#pragma once

#include "sicvpr/scaling.hpp"
#include "sicvpr/types.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace sicvpr {

// Hyperparameters of the sequential consistency matcher.
//   k: number of top-scoring references evaluated per query (clamped to N).
//   f: number of past query rows summed.
//   w: half-width of the reference window around each diagonal step.
struct SicParams {
  Index k = 200;
  Index f = 20;
  Index w = 1;

  void validate() const;
};

struct Candidate {
  Index index = 0;
  double theta = 0.0;
};

struct ConsistencyResult {
  Index match_index = 0;
  double theta = 0.0;
  // Every evaluated candidate in descending score order. Empty for matchers
  // that do not restrict to a candidate set.
  std::vector<Candidate> candidates;
};

// Counts matrix element reads; used to check the constant-work claim.
struct WorkCounter {
  std::size_t score_reads = 0;
};

// Indices of the min(k, N) largest entries of `row`, ordered by descending
// value with ties broken by ascending index.
template <typename Row>
void top_k_candidates(const Eigen::MatrixBase<Row>& row, Index k, std::vector<Index>& out) {
  const Index n = row.size();
  const Index keep = std::clamp<Index>(k, 0, n);
  const auto better = [&row](Index a, Index b) {
    const auto va = row.coeff(a);
    const auto vb = row.coeff(b);
    return va > vb || (va == vb && a < b);
  };
  out.clear();
  if (keep == n) {
    out.resize(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), Index{0});
  } else if (keep > 0) {
    // Bounded heap whose front is the worst kept index. Scanning in index
    // order means an equal value never displaces an earlier index.
    using Entry = std::pair<typename Row::Scalar, Index>;
    const auto entry_better = [](const Entry& a, const Entry& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    std::vector<Entry> heap;
    heap.reserve(static_cast<std::size_t>(keep));
    for (Index i = 0; i < keep; ++i) heap.emplace_back(row.coeff(i), i);
    std::make_heap(heap.begin(), heap.end(), entry_better);
    for (Index i = keep; i < n; ++i) {
      const auto v = row.coeff(i);
      if (v <= heap.front().first) continue;
      std::pop_heap(heap.begin(), heap.end(), entry_better);
      heap.back() = {v, i};
      std::push_heap(heap.begin(), heap.end(), entry_better);
    }
    out.reserve(heap.size());
    for (const auto& e : heap) out.push_back(e.second);
  }
  std::sort(out.begin(), out.end(), better);
}

template <typename Row>
std::vector<Index> top_k_candidates(const Eigen::MatrixBase<Row>& row, Index k) {
  std::vector<Index> out;
  top_k_candidates(row, k, out);
  return out;
}

namespace detail {

// Sequential consistency of reference `k` at query `q`. `row_at(r)` yields
// the score row of query r; only rows q-f .. q are touched.
template <typename RowAt>
double theta_from_rows(RowAt&& row_at, Index cols, Index q, Index k, const SicParams& params,
                       WorkCounter* counter) {
  double sum = 0.0;
  const Index depth = std::min(params.f, q);
  for (Index f = 0; f <= depth; ++f) {
    const Index center = k - f;
    const Index lo = std::max<Index>(0, center - params.w);
    const Index hi = std::min<Index>(cols - 1, center + params.w);
    if (hi < lo) continue;
    const auto row = row_at(q - f);
    sum += row.segment(lo, hi - lo + 1).maxCoeff();
    if (counter) counter->score_reads += static_cast<std::size_t>(hi - lo + 1);
  }
  return sum;
}

template <typename RowAt>
ConsistencyResult best_of_candidates(RowAt&& row_at, Index cols, Index q,
                                     const std::vector<Index>& candidates,
                                     const SicParams& params, WorkCounter* counter) {
  ConsistencyResult result;
  result.candidates.reserve(candidates.size());
  bool first = true;
  for (const Index k : candidates) {
    const double t = theta_from_rows(row_at, cols, q, k, params, counter);
    result.candidates.push_back({k, t});
    if (first || t > result.theta || (t == result.theta && k < result.match_index)) {
      result.theta = t;
      result.match_index = k;
      first = false;
    }
  }
  return result;
}

}  // namespace detail

// Windowed backward-diagonal sum for reference `k` at query `q`:
//   sum_{f=0}^{min(F,q)} max(matrix[q-f, k-f-W .. k-f+W])
// with the slice clamped to [0, N-1]; a fully clipped slice adds 0.
template <typename Derived>
double theta(const Eigen::MatrixBase<Derived>& matrix, Index q, Index k, const SicParams& params,
             WorkCounter* counter = nullptr) {
  return detail::theta_from_rows([&](Index r) { return matrix.row(r); }, matrix.cols(), q, k,
                                 params, counter);
}

// Scores a given candidate list and returns the best (lowest index on ties).
template <typename Derived>
ConsistencyResult sic_evaluate(const Eigen::MatrixBase<Derived>& matrix, Index q,
                               const std::vector<Index>& candidates, const SicParams& params,
                               WorkCounter* counter = nullptr) {
  return detail::best_of_candidates([&](Index r) { return matrix.row(r); }, matrix.cols(), q,
                                    candidates, params, counter);
}

// Top-K restriction followed by argmax of theta over the candidates.
template <typename Derived>
ConsistencyResult sic_match(const Eigen::MatrixBase<Derived>& matrix, Index q,
                            const SicParams& params, WorkCounter* counter = nullptr) {
  params.validate();
  const auto candidates = top_k_candidates(matrix.row(q), params.k);
  return sic_evaluate(matrix, q, candidates, params, counter);
}

// sic_match on every query row. results[q].candidates is the Q x K theta table.
template <typename Derived>
std::vector<ConsistencyResult> sic_match_all(const Eigen::MatrixBase<Derived>& matrix,
                                             const SicParams& params) {
  params.validate();
  std::vector<ConsistencyResult> results;
  results.reserve(static_cast<std::size_t>(matrix.rows()));
  std::vector<Index> candidates;
  for (Index q = 0; q < matrix.rows(); ++q) {
    top_k_candidates(matrix.row(q), params.k, candidates);
    results.push_back(sic_evaluate(matrix, q, candidates, params));
  }
  return results;
}

// Fixed-capacity ring of the most recent score rows, addressed by absolute
// query index.
class RowRing {
 public:
  RowRing(Index capacity, Index cols);

  // Appends a row and returns its absolute query index.
  Index push(const ScoreVector& row);
  auto row(Index q) const { return rows_.row(q % rows_.rows()); }
  auto mutable_row(Index q) { return rows_.row(q % rows_.rows()); }
  Index cols() const { return rows_.cols(); }
  Index count() const { return count_; }

 private:
  ScoreMatrix rows_;
  Index count_ = 0;
};

// History of the last `lags` score rows stored along diagonals: element j of
// row r lives in slot ((j - r) mod N, r mod lags). Every read that theta makes
// for one candidate then falls on 2W+1 adjacent diagonals, so the work per
// candidate touches the same few cache lines whatever the map size.
class DiagonalHistory {
 public:
  DiagonalHistory(Index cols, Index lags);

  // Appends a row and returns its absolute query index.
  Index push(const ScoreVector& row);
  // Score of reference j in row q; q must still be resident.
  double at(Index q, Index j) const;
  Index cols() const { return cols_; }
  Index count() const { return count_; }

  // Same value as theta() on the full matrix.
  double theta(Index q, Index k, const SicParams& params, WorkCounter* counter = nullptr) const;
  ConsistencyResult evaluate(Index q, const std::vector<Index>& candidates,
                             const SicParams& params, WorkCounter* counter = nullptr) const;

 private:
  Index diagonal(Index d) const;

  Index cols_;
  Index lags_;
  Index count_ = 0;
  std::vector<double> cells_;
};

// Online SIC: keeps only the last F+1 (optionally scaled) rows resident.
class SicStream {
 public:
  SicStream(Index cols, SicParams params, bool scale = true);

  // Ingests the next raw score row and returns the match for it.
  ConsistencyResult push(const ScoreVector& raw_row, WorkCounter* counter = nullptr);

  // The two halves of push, for timing: normalize + store + select
  // candidates, then score the candidates.
  const std::vector<Index>& ingest(const ScoreVector& raw_row);
  ConsistencyResult score(WorkCounter* counter = nullptr) const;

  // Scaled score of reference `n` in the most recent row.
  double latest_score(Index n) const { return latest_(n); }
  Index count() const { return history_.count(); }

 private:
  SicParams params_;
  bool scale_;
  DiagonalHistory history_;
  ScoreVector latest_;
  std::vector<Index> candidates_;
};

}  // namespace sicvpr
