#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sicvpr {

// Score matrices are stored row-major: one row per query frame, rows in
// observation order. Row-major keeps every windowed slice contiguous.
template <typename Scalar>
using ScoreMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using ScoreVectorT = Eigen::Matrix<Scalar, 1, Eigen::Dynamic, Eigen::RowMajor>;

using ScoreMatrix = ScoreMatrixT<double>;
using ScoreVector = ScoreVectorT<double>;
using Index = Eigen::Index;

// Matrix that has been passed through zscore_rows (or contrast_enhance).
using ScaledMatrix = ScoreMatrix;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file content (ragged CSV, bad magic, duplicate indices).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A field that is not a number.
class ParseError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Binary payload shorter than its header promises.
class LengthError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Declared shape does not fit in addressable memory.
class CapacityError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or inconsistent inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Evaluation impossible for the given decisions / ground truth.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sicvpr
