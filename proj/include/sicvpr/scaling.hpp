#pragma once

#include "sicvpr/simdata.hpp"
#include "sicvpr/types.hpp"

#include <cmath>

namespace sicvpr {

// Rows whose population standard deviation falls below this are treated as
// flat and mapped to zeros.
inline constexpr double kZeroSpread = 1e-12;

// Writes the z-score of `row` into `out`: (x - mean) / population sigma.
// Flat rows become all zeros. `out` may alias `row`.
template <typename InRow, typename OutRow>
void zscore_row(const Eigen::MatrixBase<InRow>& row, Eigen::MatrixBase<OutRow> const& out_) {
  using Scalar = typename InRow::Scalar;
  auto& out = const_cast<Eigen::MatrixBase<OutRow>&>(out_);
  // Plain left-to-right sums: Eigen's vectorized reductions depend on the
  // alignment of the row, so a matrix row and a standalone vector would
  // otherwise normalize to different bits.
  const Index n = row.size();
  Scalar sum = 0;
  for (Index i = 0; i < n; ++i) sum += row(i);
  const Scalar mean = sum / Scalar(n);
  Scalar squares = 0;
  for (Index i = 0; i < n; ++i) squares += (row(i) - mean) * (row(i) - mean);
  const Scalar sigma = std::sqrt(squares / Scalar(n));
  if (!(sigma >= Scalar(kZeroSpread))) {
    out.setZero();
    return;
  }
  out = (row.array() - mean) / sigma;
}

// Per-row z-score normalization of a score matrix.
template <typename Derived>
ScoreMatrixT<typename Derived::Scalar> zscore_rows(const Eigen::MatrixBase<Derived>& matrix) {
  ScoreMatrixT<typename Derived::Scalar> out(matrix.rows(), matrix.cols());
  for (Index r = 0; r < matrix.rows(); ++r) zscore_row(matrix.row(r), out.row(r));
  return out;
}

inline ScaledMatrix zscore_rows(const SimilarityMatrix& matrix) {
  return zscore_rows(matrix.values());
}

}  // namespace sicvpr
