#pragma once

// Brute-force reference implementations used only by the tests. They share
// no code with the library: plain loops over std::vector, no Eigen
// expressions, no candidate restriction.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

struct Match {
  long index = 0;
  double theta = 0.0;
};

struct Pick {
  std::size_t technique = 0;
  long index = 0;
  double theta = 0.0;
};

// Population z-score per row; rows with sigma < 1e-12 become zeros.
Grid zscore(const Grid& raw);

// Exhaustive theta over every reference of row q, argmax with lowest index on
// ties.
Match sic(const Grid& scaled, long q, long f, long w);

// Scales every technique, runs sic() on each, keeps the largest theta
// (earliest technique on ties).
Pick music(const std::vector<Grid>& raw, long q, long f, long w);

struct Point {
  double precision = 1.0;
  double recall = 0.0;
};

// One point per distinct confidence, descending. `correct[i]` says whether
// decision i is a true positive; every decision belongs to a labelled query
// and `labelled` is the recall denominator.
std::vector<Point> pr_points(const std::vector<double>& confidence,
                             const std::vector<bool>& correct, long labelled);

// Step-by-step trapezoid over recall-ascending points starting from
// (0, precision at the highest threshold).
double auc(const std::vector<Point>& points);

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace oracle
