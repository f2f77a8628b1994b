#include "sicvpr/simdata.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace sicvpr {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'I', 'M', 'M'};
constexpr std::size_t kHeaderBytes = 12;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32le(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                  static_cast<char>((v >> 16) & 0xff),
                                  static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

double read_f64le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

void write_f64le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> bytes{};
  for (auto& b : bytes) {
    b = static_cast<char>(bits & 0xff);
    bits >>= 8;
  }
  out.write(bytes.data(), bytes.size());
}

// Validates a SIMM header and returns the payload value count.
std::size_t check_bin_header(const unsigned char* header, std::uint32_t& rows, std::uint32_t& cols) {
  if (std::memcmp(header, kMagic.data(), kMagic.size()) != 0) throw FormatError("bad magic");
  rows = read_u32le(header + 4);
  cols = read_u32le(header + 8);
  if (rows == 0 || cols == 0) throw FormatError("matrix shape must be at least 1x1");
  const auto count = static_cast<unsigned __int128>(rows) * cols;
  constexpr auto kMaxValues =
      static_cast<unsigned __int128>(std::numeric_limits<std::ptrdiff_t>::max()) / sizeof(double);
  if (count > kMaxValues) {
    throw CapacityError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds addressable size");
  }
  return static_cast<std::size_t>(count);
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(ScoreMatrix values, Orientation orientation)
    : values_(std::move(values)), orientation_(orientation) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw FormatError("similarity matrix must be at least 1x1");
  }
  if (!values_.allFinite()) throw FormatError("similarity matrix contains non-finite values");
}

SimilarityMatrix SimilarityMatrix::with_orientation(Orientation orientation) const {
  SimilarityMatrix copy = *this;
  copy.orientation_ = orientation;
  return copy;
}

SimilarityMatrix as_similarity(const SimilarityMatrix& matrix) {
  if (matrix.orientation() == Orientation::kSimilarity) return matrix;
  return SimilarityMatrix(-matrix.values(), Orientation::kSimilarity);
}

GroundTruth::GroundTruth(std::vector<std::optional<Index>> entries, Index allowance)
    : entries_(std::move(entries)), allowance_(allowance) {
  if (allowance_ < 0) throw ConfigError("allowance must be non-negative");
  for (const auto& e : entries_) {
    if (e && *e < 0) throw FormatError("reference index must be non-negative");
  }
}

std::optional<Index> GroundTruth::at(Index query) const {
  if (query < 0 || query >= size()) return std::nullopt;
  return entries_[static_cast<std::size_t>(query)];
}

Index GroundTruth::labelled_count() const {
  Index n = 0;
  for (const auto& e : entries_) n += e.has_value();
  return n;
}

bool GroundTruth::is_correct(Index query, Index prediction) const {
  const auto c = at(query);
  return c && std::abs(prediction - *c) <= allowance_;
}

void GroundTruth::check_references(Index refs) const {
  for (std::size_t q = 0; q < entries_.size(); ++q) {
    if (entries_[q] && *entries_[q] >= refs) {
      throw EvalError("ground truth for query " + std::to_string(q) + " names reference " +
                      std::to_string(*entries_[q]) + " but only " + std::to_string(refs) +
                      " references exist");
    }
  }
}

TechniqueSet::TechniqueSet(std::vector<Technique> techniques) : techniques_(std::move(techniques)) {
  std::unordered_set<std::string> ids;
  for (const auto& t : techniques_) {
    if (t.id.empty()) throw ConfigError("technique id must not be empty");
    if (!ids.insert(t.id).second) throw ConfigError("duplicate technique id '" + t.id + "'");
    if (t.matrix.orientation() != Orientation::kSimilarity) {
      throw ConfigError("technique '" + t.id + "' must be converted to similarity orientation");
    }
    const auto& first = techniques_.front().matrix;
    if (t.matrix.rows() != first.rows() || t.matrix.cols() != first.cols()) {
      throw ConfigError("technique '" + t.id + "' has shape " + std::to_string(t.matrix.rows()) +
                        "x" + std::to_string(t.matrix.cols()) + ", expected " +
                        std::to_string(first.rows()) + "x" + std::to_string(first.cols()));
    }
  }
}

Index TechniqueSet::rows() const { return empty() ? 0 : techniques_.front().matrix.rows(); }
Index TechniqueSet::cols() const { return empty() ? 0 : techniques_.front().matrix.cols(); }

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

double parse_double(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("not a number: '" + std::string(field) + "'");
  }
  return value;
}

SimilarityMatrix load_matrix_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line(text.data() + pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    const auto n = static_cast<Index>(fields.size());
    if (cols < 0) cols = n;
    if (n != cols) {
      throw FormatError("row " + std::to_string(line_no) + " has " + std::to_string(n) +
                        (n == 1 ? " field" : " fields") + ", expected " + std::to_string(cols));
    }
    for (const auto f : fields) {
      try {
        values.push_back(parse_double(f));
      } catch (const ParseError& e) {
        throw ParseError("row " + std::to_string(line_no) + ": " + e.what());
      }
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty matrix file " + path.string());
  return SimilarityMatrix(Eigen::Map<const ScoreMatrix>(values.data(), rows, cols));
}

void save_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto& v = matrix.values();
  std::string line;
  for (Index r = 0; r < v.rows(); ++r) {
    line.clear();
    for (Index c = 0; c < v.cols(); ++c) {
      if (c) line += ',';
      line += format_double(v(r, c));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

SimilarityMatrix load_matrix_bin(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  if (data.size() < kHeaderBytes) {
    if (data.size() >= 4 && std::memcmp(data.data(), kMagic.data(), 4) != 0) {
      throw FormatError("bad magic");
    }
    throw LengthError("truncated header in " + path.string());
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  const std::size_t count = check_bin_header(bytes, rows, cols);
  const std::size_t expected = kHeaderBytes + count * sizeof(double);
  if (data.size() < expected) {
    throw LengthError("truncated payload: " + std::to_string(data.size()) + " bytes, expected " +
                      std::to_string(expected));
  }
  ScoreMatrix values(rows, cols);
  const unsigned char* p = bytes + kHeaderBytes;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c, p += 8) values(r, c) = read_f64le(p);
  }
  return SimilarityMatrix(std::move(values));
}

void save_matrix_bin(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  write_u32le(out, static_cast<std::uint32_t>(matrix.rows()));
  write_u32le(out, static_cast<std::uint32_t>(matrix.cols()));
  const auto& v = matrix.values();
  for (Index r = 0; r < v.rows(); ++r) {
    for (Index c = 0; c < v.cols(); ++c) write_f64le(out, v(r, c));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {
bool is_bin_path(const std::filesystem::path& path) { return path.extension() == ".simm"; }
}  // namespace

SimilarityMatrix load_matrix(const std::filesystem::path& path) {
  return is_bin_path(path) ? load_matrix_bin(path) : load_matrix_csv(path);
}

void save_matrix(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
  if (is_bin_path(path)) {
    save_matrix_bin(matrix, path);
  } else {
    save_matrix_csv(matrix, path);
  }
}

GroundTruth load_ground_truth(const std::filesystem::path& path, Index allowance) {
  const std::string text = read_file(path);
  std::vector<std::optional<Index>> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw FormatError("ground truth line " + std::to_string(line_no) +
                        " must be 'query_index,ref_index'");
    }
    Index idx[2]{};
    for (int i = 0; i < 2; ++i) {
      const auto f = fields[static_cast<std::size_t>(i)];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), idx[i]);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
        throw ParseError("ground truth line " + std::to_string(line_no) + ": not an index: '" +
                         std::string(f) + "'");
      }
      if (idx[i] < 0) {
        throw FormatError("ground truth line " + std::to_string(line_no) + ": negative index");
      }
    }
    const auto q = static_cast<std::size_t>(idx[0]);
    if (q >= entries.size()) entries.resize(q + 1);
    if (entries[q]) {
      throw FormatError("duplicate query index " + std::to_string(q) + " on line " +
                        std::to_string(line_no));
    }
    entries[q] = idx[1];
  }
  return GroundTruth(std::move(entries), allowance);
}

void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t q = 0; q < gt.entries().size(); ++q) {
    if (gt.entries()[q]) out << q << ',' << *gt.entries()[q] << '\n';
  }
}

MatrixRowReader::MatrixRowReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary), binary_(is_bin_path(path)) {
  if (!in_) throw IoError("cannot open " + path.string());
  if (binary_) {
    std::array<unsigned char, kHeaderBytes> header{};
    in_.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in_.gcount() < 4 || std::memcmp(header.data(), kMagic.data(), 4) != 0) {
      throw FormatError("bad magic");
    }
    if (in_.gcount() != static_cast<std::streamsize>(header.size())) {
      throw LengthError("truncated header in " + path.string());
    }
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    check_bin_header(header.data(), rows, cols);
    rows_left_ = rows;
    cols_ = cols;
    return;
  }
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (is_blank(line)) continue;
    cols_ = static_cast<Index>(split_fields(line).size());
    pending_ = std::move(line);
    return;
  }
  throw FormatError("empty matrix file " + path.string());
}

bool MatrixRowReader::next(ScoreVector& row) {
  row.resize(cols_);
  if (binary_) {
    if (rows_left_ == 0) return false;
    std::vector<unsigned char> buf(static_cast<std::size_t>(cols_) * sizeof(double));
    in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in_.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw LengthError("truncated payload in " + path_.string());
    }
    for (Index c = 0; c < cols_; ++c) row(c) = read_f64le(buf.data() + c * 8);
    --rows_left_;
  } else {
    std::string line;
    if (pending_) {
      line = std::move(*pending_);
      pending_.reset();
    } else {
      do {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
      } while (is_blank(line));
    }
    const auto fields = split_fields(line);
    const auto n = static_cast<Index>(fields.size());
    if (n != cols_) {
      throw FormatError("row " + std::to_string(line_no_) + " has " + std::to_string(n) +
                        (n == 1 ? " field" : " fields") + ", expected " + std::to_string(cols_));
    }
    for (Index c = 0; c < n; ++c) row(c) = parse_double(fields[static_cast<std::size_t>(c)]);
  }
  if (!row.allFinite()) throw FormatError("non-finite value in " + path_.string());
  return true;
}

}  // namespace sicvpr
