#include "oracle.hpp"
#include "sicvpr/descriptor.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace sicvpr;

namespace {

GrayImage make_image(Index w, Index h, const std::function<double(Index, Index)>& f) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h));
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      px[static_cast<std::size_t>(y * w + x)] =
          static_cast<std::uint8_t>(std::clamp(std::lround(f(x, y)), 0L, 255L));
    }
  }
  return GrayImage(w, h, std::move(px));
}

double texture(double x, double y) {
  return 128.0 + 60.0 * std::sin(x / 6.0) + 40.0 * std::cos(y / 4.0 + x / 11.0);
}

}  // namespace

TEST(Describe, ConstantImageIsZero) {
  const auto img = make_image(128, 64, [](Index, Index) { return 77.0; });
  const auto d = describe(img, {});
  EXPECT_EQ(d.values.rows(), 32);
  EXPECT_EQ(d.values.cols(), 64);
  EXPECT_TRUE(d.values.isZero(0.0));
}

TEST(Describe, BlocksAreNormalized) {
  std::mt19937_64 rng(60);
  std::uniform_int_distribution<int> px(0, 255);
  const auto img = make_image(64, 32, [&](Index, Index) { return px(rng); });
  const DescriptorParams p{64, 32, 8};
  const auto d = describe(img, p);
  for (Index by = 0; by < 32; by += 8) {
    for (Index bx = 0; bx < 64; bx += 8) {
      const auto block = d.values.block(by, bx, 8, 8);
      const double mean = block.mean();
      EXPECT_LT(std::abs(mean), 1e-9);
      EXPECT_NEAR(std::sqrt((block.array() - mean).square().mean()), 1.0, 1e-9);
    }
  }
}

TEST(Describe, AffineIntensityInvariance) {
  // Pixel levels that stay integral and in range under x1.3 + 50.
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> level(0, 15);
  std::vector<std::uint8_t> a(160 * 96);
  std::vector<std::uint8_t> b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int v = 10 * level(rng);
    a[i] = static_cast<std::uint8_t>(v);
    b[i] = static_cast<std::uint8_t>(v * 13 / 10 + 50);
  }
  const auto da = describe(GrayImage(160, 96, a), {});
  const auto db = describe(GrayImage(160, 96, b), {});
  EXPECT_LT((da.values - db.values).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Describe, DivisibilityChecked) {
  const auto img = make_image(64, 32, [](Index x, Index) { return x; });
  EXPECT_THROW(describe(img, {64, 32, 7}), ConfigError);
  EXPECT_THROW(describe(img, {60, 32, 8}), ConfigError);
}

TEST(SimilarityMatrix, SelfSimilarityOnDiagonal) {
  std::vector<GrayImage> imgs;
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<int> px(0, 255);
  for (int i = 0; i < 6; ++i) imgs.push_back(make_image(96, 48, [&](Index, Index) { return px(rng); }));
  const auto m = similarity_matrix(imgs, imgs, {32, 16, 8});
  EXPECT_EQ(m.orientation(), Orientation::kSimilarity);
  for (Index r = 0; r < 6; ++r) {
    EXPECT_EQ(m(r, r), 0.0);
    Index arg = -1;
    m.values().row(r).maxCoeff(&arg);
    EXPECT_EQ(arg, r);
  }
  const auto one = similarity_matrix({imgs[0]}, {imgs[1]}, {32, 16, 8});
  EXPECT_EQ(one.rows(), 1);
  EXPECT_EQ(one.cols(), 1);
  EXPECT_LT(one(0, 0), 0.0);
}

TEST(SimilarityMatrix, DecreasesWithShift) {
  const DescriptorParams p{64, 32, 8};
  const auto base = describe(make_image(64, 32, [](Index x, Index y) { return texture(x, y); }), p);
  double prev = 1.0;
  for (Index s = 0; s <= 8; ++s) {
    const auto shifted =
        describe(make_image(64, 32, [s](Index x, Index y) { return texture(x + s, y); }), p);
    const double sim = -mean_abs_difference(base, shifted);
    EXPECT_LT(sim, prev) << "shift " << s;
    prev = sim;
  }
}

TEST(Pgm, RoundTripAndComments) {
  oracle::TempDir dir("pgm");
  const auto img = make_image(12, 9, [](Index x, Index y) { return 20 * x + y; });
  write_pgm(img, dir / "a.pgm");
  const auto back = read_pgm(dir / "a.pgm");
  EXPECT_EQ(back.width(), 12);
  EXPECT_EQ(back.height(), 9);
  EXPECT_EQ(back.pixels(), img.pixels());
  std::string body(64, '\x07');
  oracle::write_file(dir / "c.pgm", "P5\n# made by hand\n8 8\n# max\n255\n" + body);
  EXPECT_EQ(read_pgm(dir / "c.pgm")(7, 7), 7);
}

TEST(Pgm, ErrorsNameTheFile) {
  oracle::TempDir dir("pgm");
  const std::string body(64, '\0');
  oracle::write_file(dir / "ascii.pgm", "P2\n8 8\n255\n0 0 0\n");
  oracle::write_file(dir / "deep.pgm", "P5\n8 8\n65535\n" + body);
  oracle::write_file(dir / "short.pgm", "P5\n8 8\n255\n" + body.substr(0, 10));
  oracle::write_file(dir / "tiny.pgm", "P5\n4 4\n255\n" + body.substr(0, 16));
  for (const char* name : {"ascii.pgm", "deep.pgm", "short.pgm", "tiny.pgm", "missing.pgm"}) {
    try {
      read_pgm(dir / name);
      ADD_FAILURE() << name << " was accepted";
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
    }
  }
}

TEST(ListImages, LexicographicOrder) {
  oracle::TempDir dir("list");
  for (const char* name : {"b.pgm", "a10.pgm", "a2.pgm"}) oracle::write_file(dir / name, "");
  const auto files = list_images(dir.path());
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[0].filename(), "a10.pgm");
  EXPECT_EQ(files[1].filename(), "a2.pgm");
  EXPECT_EQ(files[2].filename(), "b.pgm");
}
