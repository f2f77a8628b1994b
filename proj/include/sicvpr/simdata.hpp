#pragma once

#include "sicvpr/types.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace sicvpr {

enum class Orientation { kSimilarity, kDistance };

// Q x N query-vs-reference scores. Immutable once built; construction rejects
// empty shapes and non-finite values.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(ScoreMatrix values,
                            Orientation orientation = Orientation::kSimilarity);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const ScoreMatrix& values() const { return values_; }
  Orientation orientation() const { return orientation_; }
  double operator()(Index q, Index n) const { return values_(q, n); }

  // Same values, different orientation flag. No arithmetic is applied.
  SimilarityMatrix with_orientation(Orientation orientation) const;

 private:
  ScoreMatrix values_;
  Orientation orientation_;
};

// Distance matrices are negated so that larger is better; similarity
// matrices are returned unchanged.
SimilarityMatrix as_similarity(const SimilarityMatrix& matrix);

// Per-query correct reference index plus the frame tolerance around it.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(std::vector<std::optional<Index>> entries, Index allowance);

  Index allowance() const { return allowance_; }
  const std::vector<std::optional<Index>>& entries() const { return entries_; }
  std::optional<Index> at(Index query) const;
  Index size() const { return static_cast<Index>(entries_.size()); }
  Index labelled_count() const;

  bool is_correct(Index query, Index prediction) const;

  // Throws EvalError if any recorded reference index falls outside [0, refs).
  void check_references(Index refs) const;

 private:
  std::vector<std::optional<Index>> entries_;
  Index allowance_ = 0;
};

struct Technique {
  std::string id;
  SimilarityMatrix matrix;
};

// Ordered techniques sharing one (Q, N) shape. Order breaks ties.
class TechniqueSet {
 public:
  TechniqueSet() = default;
  explicit TechniqueSet(std::vector<Technique> techniques);

  bool empty() const { return techniques_.empty(); }
  std::size_t size() const { return techniques_.size(); }
  const Technique& operator[](std::size_t i) const { return techniques_[i]; }
  auto begin() const { return techniques_.begin(); }
  auto end() const { return techniques_.end(); }
  Index rows() const;
  Index cols() const;

 private:
  std::vector<Technique> techniques_;
};

SimilarityMatrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path);

SimilarityMatrix load_matrix_bin(const std::filesystem::path& path);
void save_matrix_bin(const SimilarityMatrix& matrix, const std::filesystem::path& path);

// Dispatches on extension: ".simm" is binary, anything else CSV.
SimilarityMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const SimilarityMatrix& matrix, const std::filesystem::path& path);

GroundTruth load_ground_truth(const std::filesystem::path& path, Index allowance);
void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view field);

// Reads a matrix file one row at a time so that online matchers only keep
// the rows they need resident.
class MatrixRowReader {
 public:
  explicit MatrixRowReader(const std::filesystem::path& path);

  // Number of columns; known after construction.
  Index cols() const { return cols_; }
  // Fills `row` with the next row. Returns false at end of file.
  bool next(ScoreVector& row);

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  bool binary_ = false;
  Index cols_ = 0;
  std::uint32_t rows_left_ = 0;
  std::size_t line_no_ = 0;
  std::optional<std::string> pending_;
};

}  // namespace sicvpr
