#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles.hpp"
#include "sigedge/abel.hpp"

using namespace sigedge;

namespace {

Image random_slice(int rows, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return oracle::image_from(rows, 2 * n, [&](int, int) { return u(rng); });
}

// Mirror-symmetric slice built from a right-half profile per row.
Image symmetric_slice(int rows, int n, std::uint64_t seed) {
  Image img = random_slice(rows, n, seed);
  for (int u = 0; u < rows; ++u)
    for (int j = 0; j < n; ++j) img(u, n - 1 - j) = img(u, n + j);
  return img;
}

}  // namespace

TEST(AbelOperator, TwoCellValues) {
  const auto op = build_operator(2);
  const auto& h = op.projection();
  EXPECT_NEAR(h(0, 0), 2.0 * std::sqrt(0.75), 1e-14);
  EXPECT_NEAR(h(0, 1), 2.0 * (std::sqrt(3.75) - std::sqrt(0.75)), 1e-14);
  EXPECT_EQ(h(1, 0), 0.0);
  EXPECT_NEAR(h(1, 1), 2.0 * std::sqrt(1.75), 1e-14);
  EXPECT_NEAR(h(0, 0), 1.73205, 1e-5);
  EXPECT_NEAR(h(0, 1), 2.14093, 1e-5);
  EXPECT_NEAR(h(1, 1), 2.64575, 1e-5);
}

// Each entry is the chord length of ray k through cell j: integrate
// 2 x / sqrt(x^2 - u^2) over the cell by adaptive quadrature.
TEST(AbelOperator, EntriesMatchNumericalChordIntegral) {
  const int n = 12;
  const auto op = build_operator(n);
  for (int k = 0; k < n; ++k) {
    const double u = k + 0.5;
    for (int j = k; j < n; ++j) {
      const double lo = std::max<double>(j, u), hi = j + 1.0;
      // substitute x = sqrt(u^2 + t^2): dx x / sqrt(x^2-u^2) = dt
      const double t0 = std::sqrt(lo * lo - u * u), t1 = std::sqrt(hi * hi - u * u);
      const double chord = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          [](double) { return 2.0; }, t0, t1);
      EXPECT_NEAR(op.projection()(k, j), chord, 1e-12);
    }
  }
}

TEST(AbelOperator, UpperTriangularWithPositiveDiagonal) {
  for (int n : {2, 17, 64}) {
    const auto op = build_operator(n);
    const auto& h = op.projection();
    for (int k = 0; k < n; ++k) {
      EXPECT_GT(h(k, k), 0.0);
      for (int j = 0; j < k; ++j) EXPECT_EQ(h(k, j), 0.0);
    }
  }
}

TEST(AbelOperator, InverseIsExact) {
  for (int n : {2, 64, 256}) {
    const auto op = build_operator(n);
    const auto id = Eigen::MatrixXd::Identity(n, n);
    EXPECT_LE((op.inverse() * op.projection() - id).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((op.projection() * op.inverse() - id).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(AbelOperator, PitchScalesLinearly) {
  const auto a = build_operator(16, 1.0);
  const auto b = build_operator(16, 0.5);
  EXPECT_LE((b.projection() - 0.5 * a.projection()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((b.inverse() - 2.0 * a.inverse()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(AbelOperator, RejectsBadArguments) {
  EXPECT_THROW(build_operator(1), std::invalid_argument);
  EXPECT_THROW(build_operator(8, 0.0), std::invalid_argument);
  EXPECT_THROW(invert_upper_triangular(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(AbelOperator, NoiseAmplificationGrowsTowardAxis) {
  const auto op = build_operator(128);
  const auto amp = op.noise_amplification();
  EXPECT_GT(amp[0], amp[10]);
  EXPECT_GT(amp[10], amp[100]);
  EXPECT_NEAR(amp[5], op.inverse().row(5).norm(), 1e-15);
}

TEST(SliceGeometry, DistancesAndMirroring) {
  const SliceGeometry g{4};
  EXPECT_EQ(g.full_width(), 8);
  EXPECT_DOUBLE_EQ(g.axis(), 3.5);
  EXPECT_EQ(g.cell(4), 0);
  EXPECT_EQ(g.cell(3), 0);
  EXPECT_EQ(g.cell(0), 3);
  EXPECT_EQ(g.cell(7), 3);
  EXPECT_DOUBLE_EQ(g.distance(0), 3.5);
  EXPECT_TRUE(g.right_side(4));
  EXPECT_FALSE(g.right_side(3));
}

TEST(Radiograph, UniformCylinderChords) {
  const int n = 256, R = n / 2;
  const auto op = build_operator(n);
  const Image slice = oracle::image_from(1, 2 * n, [&](int, int c) {
    return SliceGeometry{n}.distance(c) < R ? 1.0 : 0.0;
  });
  const Image g = radiograph(slice, op);
  double num = 0.0, den = 0.0;
  for (int c = 0; c < 2 * n; ++c) {
    const double u = SliceGeometry{n}.distance(c);
    const double expect = u < R ? 2.0 * std::sqrt(R * R - u * u) : 0.0;
    num += (g(0, c) - expect) * (g(0, c) - expect);
    den += expect * expect;
  }
  EXPECT_LE(std::sqrt(num / den), 0.01);
}

TEST(Radiograph, Linearity) {
  const auto op = build_operator(20);
  EXPECT_EQ(radiograph(Image(3, 40, 0.0), op), Image(3, 40, 0.0));
  const Image f = symmetric_slice(3, 20, 1);
  Image f2 = f;
  for (double& x : f2.data()) x *= 2.0;
  const Image g = radiograph(f, op), g2 = radiograph(f2, op);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(g2.data()[k], 2.0 * g.data()[k], 1e-12);
}

TEST(Radiograph, WidthMismatchThrows) {
  const auto op = build_operator(8);
  EXPECT_THROW(radiograph(Image(2, 15), op), std::invalid_argument);
  EXPECT_THROW(reconstruct(Image(2, 18), op), std::invalid_argument);
}

TEST(Reconstruct, RoundTripOnSymmetricSlices) {
  const int n = 64;
  const auto op = build_operator(n);
  const Image f = symmetric_slice(5, n, 2);
  const Image back = reconstruct(radiograph(f, op), op);
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(back.data()[k], f.data()[k], 1e-9);
}

TEST(Reconstruct, AnalyticPairRecoversIndicator) {
  const int n = 256, R = n / 2;
  const auto op = build_operator(n);
  const SliceGeometry geo{n};
  const Image g = oracle::image_from(1, 2 * n, [&](int, int c) {
    const double u = geo.distance(c);
    return u < R ? 2.0 * std::sqrt(R * R - u * u) : 0.0;
  });
  const Image f = reconstruct(g, op);
  for (int c = 0; c < 2 * n; ++c) {
    const double d = geo.distance(c);
    if (std::abs(d - R) < 3.0) continue;
    EXPECT_NEAR(f(0, c), d < R ? 1.0 : 0.0, 0.02) << "column " << c;
  }
}

TEST(Reconstruct, ZeroInZeroOut) {
  const auto op = build_operator(16);
  EXPECT_EQ(reconstruct(Image(4, 32, 0.0), op), Image(4, 32, 0.0));
}

TEST(ReconstructProperties, RowLocality) {
  const auto op = build_operator(32);
  Image g = random_slice(6, 32, 3);
  const Image before = reconstruct(g, op);
  for (int c = 0; c < 64; ++c) g(2, c) += 0.5 * c;
  const Image after = reconstruct(g, op);
  for (int u = 0; u < 6; ++u)
    for (int c = 0; c < 64; ++c)
      if (u != 2) EXPECT_EQ(before(u, c), after(u, c));
}

TEST(ReconstructProperties, HalvesAreIndependent) {
  const int n = 32;
  const auto op = build_operator(n);
  Image g = random_slice(4, n, 4);
  const Image before = reconstruct(g, op);
  for (int u = 0; u < 4; ++u)
    for (int c = 0; c < n; ++c) g(u, c) = -3.0 * g(u, c) + 1.0;
  const Image after = reconstruct(g, op);
  for (int u = 0; u < 4; ++u)
    for (int c = n; c < 2 * n; ++c) EXPECT_EQ(before(u, c), after(u, c));
}

TEST(WriteMatrixCsv, RoundTripsExactly) {
  const auto op = build_operator(5);
  std::ostringstream os;
  write_matrix_csv(os, op.inverse());
  std::istringstream is(os.str());
  for (int i = 0; i < 5; ++i) {
    std::string line;
    std::getline(is, line);
    std::istringstream ls(line);
    for (int j = 0; j < 5; ++j) {
      std::string cell;
      std::getline(ls, cell, ',');
      EXPECT_EQ(std::stod(cell), op.inverse()(i, j));
    }
  }
}
