#include "sicvpr/descriptor.hpp"

#include "sicvpr/scaling.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

namespace sicvpr {

namespace {

// g x s matrix of area weights: cell x averages source samples in
// [x s / g, (x + 1) s / g), fractional overlaps weighted.
Eigen::MatrixXd area_weights(Index g, Index s) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g, s);
  const double scale = static_cast<double>(s) / static_cast<double>(g);
  for (Index x = 0; x < g; ++x) {
    const double lo = static_cast<double>(x) * scale;
    const double hi = static_cast<double>(x + 1) * scale;
    const auto first = static_cast<Index>(std::floor(lo));
    const auto last = std::min<Index>(s - 1, static_cast<Index>(std::ceil(hi)) - 1);
    for (Index i = first; i <= last; ++i) {
      const double overlap = std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
      if (overlap > 0.0) a(x, i) = overlap / scale;
    }
  }
  return a;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

}  // namespace

GrayImage::GrayImage(Index width, Index height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ < 8 || height_ < 8) throw ConfigError("images must be at least 8x8");
  if (static_cast<Index>(pixels_.size()) != width_ * height_) {
    throw ConfigError("pixel count does not match image size");
  }
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    if (header_token(in) != "P5") throw IoError("not a binary PGM (P5)");
    const Index width = std::stol(header_token(in));
    const Index height = std::stol(header_token(in));
    const Index maxval = std::stol(header_token(in));
    if (maxval != 255) throw IoError("unsupported PGM maxval " + std::to_string(maxval));
    if (width < 1 || height < 1) throw IoError("bad PGM dimensions");
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width * height));
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
      throw IoError("truncated pixel data");
    }
    return GrayImage(width, height, std::move(pixels));
  } catch (const std::logic_error&) {
    throw IoError("cannot decode " + path.string() + ": malformed PGM header");
  } catch (const Error& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

void DescriptorParams::validate() const {
  if (grid_w < 1 || grid_h < 1 || patch < 1) throw ConfigError("grid and patch must be positive");
  if (grid_w % patch != 0 || grid_h % patch != 0) {
    throw ConfigError("grid " + std::to_string(grid_w) + "x" + std::to_string(grid_h) +
                      " is not divisible by patch " + std::to_string(patch));
  }
}

PatchDescriptor describe(const GrayImage& image, const DescriptorParams& params) {
  params.validate();
  Eigen::MatrixXd pixels(image.height(), image.width());
  for (Index y = 0; y < image.height(); ++y) {
    for (Index x = 0; x < image.width(); ++x) pixels(y, x) = image(x, y);
  }
  const Eigen::MatrixXd thumb = area_weights(params.grid_h, image.height()) * pixels *
                                area_weights(params.grid_w, image.width()).transpose();

  PatchDescriptor d;
  d.values.resize(params.grid_h, params.grid_w);
  ScoreVector block(params.patch * params.patch);
  for (Index by = 0; by < params.grid_h; by += params.patch) {
    for (Index bx = 0; bx < params.grid_w; bx += params.patch) {
      for (Index y = 0; y < params.patch; ++y) {
        block.segment(y * params.patch, params.patch) = thumb.block(by + y, bx, 1, params.patch);
      }
      zscore_row(block, block);
      for (Index y = 0; y < params.patch; ++y) {
        d.values.block(by + y, bx, 1, params.patch) = block.segment(y * params.patch, params.patch);
      }
    }
  }
  return d;
}

double mean_abs_difference(const PatchDescriptor& a, const PatchDescriptor& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw ConfigError("descriptor grids differ");
  }
  return (a.values - b.values).cwiseAbs().mean();
}

SimilarityMatrix similarity_matrix(const std::vector<PatchDescriptor>& queries,
                                   const std::vector<PatchDescriptor>& references) {
  if (queries.empty() || references.empty()) throw ConfigError("need at least one image per side");
  ScoreMatrix values(static_cast<Index>(queries.size()), static_cast<Index>(references.size()));
  for (Index q = 0; q < values.rows(); ++q) {
    for (Index r = 0; r < values.cols(); ++r) {
      values(q, r) = -mean_abs_difference(queries[static_cast<std::size_t>(q)],
                                          references[static_cast<std::size_t>(r)]);
    }
  }
  return SimilarityMatrix(std::move(values));
}

SimilarityMatrix similarity_matrix(const std::vector<GrayImage>& queries,
                                   const std::vector<GrayImage>& references,
                                   const DescriptorParams& params) {
  std::vector<PatchDescriptor> qd;
  std::vector<PatchDescriptor> rd;
  for (const auto& img : queries) qd.push_back(describe(img, params));
  for (const auto& img : references) rd.push_back(describe(img, params));
  return similarity_matrix(qd, rd);
}

}  // namespace sicvpr
