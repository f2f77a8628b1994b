#pragma once

#include "sicvpr/simdata.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sicvpr {

// Row-major 8-bit luminance image, at least 8x8.
class GrayImage {
 public:
  GrayImage(Index width, Index height, std::vector<std::uint8_t> pixels);

  Index width() const { return width_; }
  Index height() const { return height_; }
  std::uint8_t operator()(Index x, Index y) const {
    return pixels_[static_cast<std::size_t>(y * width_ + x)];
  }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

 private:
  Index width_;
  Index height_;
  std::vector<std::uint8_t> pixels_;
};

// Binary PGM (P5) with maxval 255.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

// Every regular file in `dir`, sorted lexicographically by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

struct DescriptorParams {
  Index grid_w = 64;
  Index grid_h = 32;
  Index patch = 8;

  void validate() const;
};

// Downsampled thumbnail whose patch x patch blocks are each z-scored.
struct PatchDescriptor {
  ScoreMatrix values;  // grid_h x grid_w
};

// Area-average downsample to the grid, then per-block normalization (flat
// blocks become zeros).
PatchDescriptor describe(const GrayImage& image, const DescriptorParams& params);

// Mean absolute difference between two descriptors of the same grid.
double mean_abs_difference(const PatchDescriptor& a, const PatchDescriptor& b);

// Element (q, r) is the negated mean absolute difference between query q and
// reference r.
SimilarityMatrix similarity_matrix(const std::vector<PatchDescriptor>& queries,
                                   const std::vector<PatchDescriptor>& references);
SimilarityMatrix similarity_matrix(const std::vector<GrayImage>& queries,
                                   const std::vector<GrayImage>& references,
                                   const DescriptorParams& params);

}  // namespace sicvpr
