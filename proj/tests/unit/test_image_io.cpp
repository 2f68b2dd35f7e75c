#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "sigedge/image_io.hpp"
#include "sigedge/noise_white.hpp"

using namespace sigedge;
namespace fs = std::filesystem;

namespace {

std::string tmp(const std::string& name) {
  return (fs::temp_directory_path() / ("sigedge_io_" + name)).string();
}

}  // namespace

TEST(F64, RoundTripIsBitExact) {
  Image img = sample_field({1.0, 3, 7, 9});
  img(0, 0) = std::numeric_limits<double>::denorm_min();
  img(1, 1) = -0.0;
  const auto path = tmp("a.f64");
  io::write_f64(path, img);
  EXPECT_EQ(io::read_f64(path), img);
  EXPECT_EQ(io::read_image(path), img);
  EXPECT_FALSE(fs::exists(path + ".tmp"));
}

TEST(F64, RejectsForeignAndTruncatedFiles) {
  const auto path = tmp("bad.f64");
  {
    std::ofstream(path) << "NOPE 1 2 2\n";
  }
  EXPECT_THROW(io::read_f64(path), std::runtime_error);
  {
    std::ofstream(path) << "SIGEDGE-F64 1 2 2\n1234";
  }
  EXPECT_THROW(io::read_f64(path), std::runtime_error);
  EXPECT_THROW(io::read_f64(tmp("missing.f64")), std::runtime_error);
}

TEST(Pgm, BinaryRoundTrip) {
  Mask m(3, 5);
  for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = static_cast<std::uint8_t>(17 * k);
  const auto path = tmp("a.pgm");
  io::write_pgm(path, m);
  EXPECT_EQ(io::read_pgm(path), m);
}

TEST(Pgm, ReadsAsciiWithCommentsAndScalesToUnitInterval) {
  const auto path = tmp("ascii.pgm");
  {
    std::ofstream(path) << "P2\n# a comment\n3 1\n# another\n100\n0 50 100\n";
  }
  const Mask m = io::read_pgm(path);
  EXPECT_EQ(m(0, 1), 50);
  const Image img = io::read_image(path);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(img(0, 2), 1.0);
}

TEST(Pgm, RejectsUnsupported) {
  const auto path = tmp("p6.pgm");
  {
    std::ofstream(path) << "P6\n1 1\n255\nabc";
  }
  EXPECT_THROW(io::read_pgm(path), std::runtime_error);
  {
    std::ofstream(path) << "P2\n1 1\n65535\n3\n";
  }
  EXPECT_THROW(io::read_pgm(path), std::runtime_error);
}

TEST(MaskPgm, SetPixelsAre255) {
  Mask m(1, 3, 0);
  m(0, 1) = 1;
  const auto path = tmp("mask.pgm");
  io::write_mask_pgm(path, m);
  const Mask back = io::read_pgm(path);
  EXPECT_EQ(back(0, 0), 0);
  EXPECT_EQ(back(0, 1), 255);
}

TEST(ToGrey, MinMaxScaling) {
  Image img(1, 3);
  img(0, 0) = -2.0;
  img(0, 1) = 0.0;
  img(0, 2) = 2.0;
  double lo = 0, hi = 0;
  const Mask g = io::to_grey(img, &lo, &hi);
  EXPECT_EQ(g(0, 0), 0);
  EXPECT_EQ(g(0, 1), 128);
  EXPECT_EQ(g(0, 2), 255);
  EXPECT_EQ(lo, -2.0);
  EXPECT_EQ(hi, 2.0);
  EXPECT_EQ(io::to_grey(Image(2, 2, 5.0))(1, 1), 0);
}
