#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sigedge/edge_extract.hpp"
#include "sigedge/local_poly.hpp"
#include "sigedge/noise_white.hpp"

using namespace sigedge;

TEST(ZeroCrossings, TieGoesToLeftPixel) {
  Image l(1, 6, -1.0);
  for (int v = 3; v < 6; ++v) l(0, v) = 1.0;
  const Mask z = zero_crossings({l, 0});
  EXPECT_EQ(z(0, 2), 1);
  EXPECT_EQ(z(0, 3), 0);
  EXPECT_EQ(count(z), 1u);
}

TEST(ZeroCrossings, TieGoesToUpperPixel) {
  Image l(6, 1, 2.0);
  for (int u = 4; u < 6; ++u) l(u, 0) = -2.0;
  const Mask z = zero_crossings({l, 0});
  EXPECT_EQ(z(3, 0), 1);
  EXPECT_EQ(count(z), 1u);
}

TEST(ZeroCrossings, SmallerMagnitudeSideIsMarked) {
  Image l(1, 4, 0.0);
  l(0, 0) = -5.0;
  l(0, 1) = -5.0;
  l(0, 2) = 0.5;
  l(0, 3) = 5.0;
  const Mask z = zero_crossings({l, 0});
  EXPECT_EQ(z(0, 2), 1);
  EXPECT_EQ(count(z), 1u);
}

TEST(ZeroCrossings, ConstantFieldIsEmpty) {
  EXPECT_EQ(count(zero_crossings({Image(20, 20, 3.0), 2})), 0u);
}

TEST(ZeroCrossings, IgnoresMargin) {
  Image l(8, 8, 1.0);
  l(0, 0) = -1.0;  // inside the margin only
  EXPECT_EQ(count(zero_crossings({l, 1})), 0u);
}

// Samples of u^2 + v^2 - R^2 cross zero on the radius-R circle.
TEST(ZeroCrossings, CircleApproximation) {
  const int size = 81, c = 40;
  const double R = 23.0;
  const Image l = oracle::image_from(size, size, [&](int u, int v) {
    return double((u - c) * (u - c) + (v - c) * (v - c)) - R * R;
  });
  const Mask z = zero_crossings({l, 0});
  std::size_t marked = 0;
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      if (!z(u, v)) continue;
      ++marked;
      EXPECT_LE(std::abs(std::hypot(u - c, v - c) - R), 1.0);
    }
  }
  // Every rasterised circle point has a marked pixel within one step.
  for (int k = 0; k < 360; ++k) {
    const double t = k * M_PI / 180.0;
    const int u = static_cast<int>(std::lround(c + R * std::sin(t)));
    const int v = static_cast<int>(std::lround(c + R * std::cos(t)));
    bool near = false;
    for (int du = -1; du <= 1; ++du)
      for (int dv = -1; dv <= 1; ++dv) near = near || z(u + du, v + dv);
    EXPECT_TRUE(near) << "angle " << k;
  }
  EXPECT_GT(marked, 100u);
}

TEST(SignificantEdges, ThresholdComparisons) {
  Mask crossing(1, 2, 1);
  Image contrast(1, 2);
  contrast(0, 0) = 5.0;
  contrast(0, 1) = 2.0;
  const EdgeMap e = significant_edges(crossing, contrast, 3.0, 0);
  EXPECT_EQ(e.significant(0, 0), 1);
  EXPECT_EQ(e.significant(0, 1), 0);
  EXPECT_EQ(e.contrast_at_crossing(0, 1), 2.0);
}

TEST(SignificantEdges, ColumnThresholds) {
  const Mask crossing(2, 3, 1);
  const Image contrast(2, 3, 1.0);
  const std::vector<double> t{0.5, 1.5, 1.0};
  const EdgeMap e = significant_edges(crossing, contrast, t, 0);
  EXPECT_EQ(e.significant(1, 0), 1);
  EXPECT_EQ(e.significant(1, 1), 0);
  EXPECT_EQ(e.significant(1, 2), 1);
  EXPECT_THROW(significant_edges(crossing, contrast, std::vector<double>{1.0}, 0),
               std::invalid_argument);
  EXPECT_THROW(significant_edges(Mask(3, 3), contrast, 1.0, 0), std::invalid_argument);
}

TEST(SignificantEdges, SubsetOfCrossings) {
  const Image noise = sample_field({1.0, 12, 64, 64});
  const auto f = contrast_field(noise, ContrastKernel::c1(3));
  const Mask z = zero_crossings(laplacian_field(noise, 3));
  const EdgeMap e = significant_edges(z, f.c, 0.1, 3);
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (e.significant.data()[k]) EXPECT_TRUE(z.data()[k]);
    if (!z.data()[k]) EXPECT_EQ(e.contrast_at_crossing.data()[k], 0.0);
  }
}

TEST(SignificantEdgesProperties, ShrinkingEpsilonNeverAddsPixels) {
  const Image noise = sample_field({0.5, 13, 96, 96});
  const int r = 4;
  const auto f = contrast_field(noise, ContrastKernel::c1(r));
  const Mask z = zero_crossings(laplacian_field(noise, r));
  Mask prev = significant_edges(z, f.c, threshold_white(0.5, 0.5, r), r).significant;
  for (double eps : {0.2, 0.1, 0.05, 0.01, 1e-3}) {
    const Mask next = significant_edges(z, f.c, threshold_white(eps, 0.5, r), r).significant;
    for (std::size_t k = 0; k < next.size(); ++k) EXPECT_LE(next.data()[k], prev.data()[k]);
    prev = next;
  }
}

TEST(SignificantEdgesProperties, Deterministic) {
  const Image noise = sample_field({1.0, 14, 48, 48});
  const auto f = contrast_field(noise, ContrastKernel::c1(2));
  const Mask z = zero_crossings(laplacian_field(noise, 2));
  const auto a = significant_edges(z, f.c, 0.3, 2);
  const auto b = significant_edges(z, f.c, 0.3, 2);
  EXPECT_EQ(a.significant, b.significant);
  EXPECT_EQ(a.contrast_at_crossing, b.contrast_at_crossing);
}

// Pure white noise at eps = 0.01 produces significant pixels at no more than the
// binomial bound over the crossing pixels.
TEST(SignificantEdges, PureNoiseFalseAlarmBound) {
  const int r = 12;
  const double eps = 1e-2, sigma = 1.0;
  const Image noise = sample_field({sigma, 15, 512, 512});
  const auto f = contrast_field(noise, ContrastKernel::c1(r));
  const Mask z = zero_crossings(laplacian_field(noise, r));
  const EdgeMap e = significant_edges(z, f.c, threshold_white(eps, sigma, r), r);
  const double n = static_cast<double>(count(z));
  EXPECT_GT(n, 0.0);
  EXPECT_LE(static_cast<double>(count(e.significant)), eps * n + 3.0 * std::sqrt(eps * n));
}

TEST(ContrastOverlay, ScalesCrossingsToOneThrough255) {
  Mask z(1, 4, 0);
  z(0, 1) = z(0, 2) = z(0, 3) = 1;
  Image c(1, 4);
  c(0, 1) = 2.0;
  c(0, 2) = 4.0;
  c(0, 3) = 3.0;
  const EdgeMap e = significant_edges(z, c, 10.0, 0);
  double lo = 0, hi = 0;
  const Mask o = contrast_overlay(e, &lo, &hi);
  EXPECT_EQ(o(0, 0), 0);
  EXPECT_EQ(o(0, 1), 1);
  EXPECT_EQ(o(0, 2), 255);
  EXPECT_EQ(o(0, 3), 128);
  EXPECT_EQ(lo, 2.0);
  EXPECT_EQ(hi, 4.0);
}
