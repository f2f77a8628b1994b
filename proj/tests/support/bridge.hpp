#pragma once

// Conversions between library matrices and the oracle's plain grids.

#include "oracle.hpp"
#include "sicvpr/types.hpp"

#include <random>

namespace oracle {

inline Grid to_grid(const sicvpr::ScoreMatrix& m) {
  Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (sicvpr::Index r = 0; r < m.rows(); ++r) {
    for (sicvpr::Index c = 0; c < m.cols(); ++c) {
      g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    }
  }
  return g;
}

inline sicvpr::ScoreMatrix random_matrix(std::mt19937_64& rng, sicvpr::Index rows,
                                         sicvpr::Index cols) {
  std::normal_distribution<double> normal;
  sicvpr::ScoreMatrix m(rows, cols);
  for (sicvpr::Index r = 0; r < rows; ++r) {
    for (sicvpr::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace oracle
