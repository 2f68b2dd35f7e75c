#include "sigedge/abel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sigedge {

namespace {

void require_width(const Image& img, const AbelOperator& op, const char* what) {
  if (img.cols() != op.geometry().full_width()) {
    throw std::invalid_argument(std::string(what) + ": image width " +
                                std::to_string(img.cols()) + " != 2n = " +
                                std::to_string(op.geometry().full_width()));
  }
}

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Right half in cell order is columns n..2n-1; left half in cell order is
// columns n-1..0.
RowMajor gather_half(const Image& img, int n, bool right) {
  RowMajor out(img.rows(), n);
  for (int u = 0; u < img.rows(); ++u) {
    const auto row = img.row(u);
    for (int j = 0; j < n; ++j) out(u, j) = right ? row[n + j] : row[n - 1 - j];
  }
  return out;
}

void scatter_half(const RowMajor& half, int n, bool right, Image& img) {
  for (int u = 0; u < img.rows(); ++u) {
    auto row = img.row(u);
    for (int j = 0; j < n; ++j) (right ? row[n + j] : row[n - 1 - j]) = half(u, j);
  }
}

}  // namespace

Eigen::MatrixXd invert_upper_triangular(const Eigen::MatrixXd& upper) {
  const auto n = upper.rows();
  if (upper.cols() != n) throw std::invalid_argument("invert_upper_triangular: not square");
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    // Solve upper * x = e_c; x is zero below row c.
    for (Eigen::Index i = c; i >= 0; --i) {
      double acc = (i == c) ? 1.0 : 0.0;
      for (Eigen::Index k = i + 1; k <= c; ++k) acc -= upper(i, k) * inv(k, c);
      if (upper(i, i) == 0.0) {
        throw std::invalid_argument("invert_upper_triangular: zero diagonal");
      }
      inv(i, c) = acc / upper(i, i);
    }
  }
  return inv;
}

AbelOperator build_operator(int n, double pitch) {
  if (n < 2) throw std::invalid_argument("build_operator: n must be >= 2");
  if (!(pitch > 0.0)) throw std::invalid_argument("build_operator: pitch must be > 0");
  AbelOperator op;
  op.pitch_ = pitch;
  op.h_ = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double u = k + 0.5;
    const double u2 = u * u;
    for (int j = k; j < n; ++j) {
      const double lo = std::max(static_cast<double>(j), u);
      const double hi = j + 1.0;
      op.h_(k, j) = 2.0 * pitch * (std::sqrt(hi * hi - u2) - std::sqrt(lo * lo - u2));
    }
  }
  op.m_ = invert_upper_triangular(op.h_);
  return op;
}

std::vector<double> AbelOperator::noise_amplification() const {
  std::vector<double> out(static_cast<std::size_t>(m_.rows()));
  for (Eigen::Index j = 0; j < m_.rows(); ++j) out[static_cast<std::size_t>(j)] = m_.row(j).norm();
  return out;
}

Image radiograph(const Image& slice, const AbelOperator& op) {
  require_width(slice, op, "radiograph");
  const int n = op.half_width();
  const RowMajor right = gather_half(slice, n, true);
  const RowMajor g = right * op.projection().transpose();
  Image out(slice.rows(), slice.cols());
  scatter_half(g, n, true, out);
  scatter_half(g, n, false, out);
  return out;
}

Image reconstruct(const Image& radiograph, const AbelOperator& op) {
  require_width(radiograph, op, "reconstruct");
  const int n = op.half_width();
  Image out(radiograph.rows(), radiograph.cols());
  for (bool right : {false, true}) {
    const RowMajor g = gather_half(radiograph, n, right);
    const RowMajor f = g * op.inverse().transpose();
    scatter_half(f, n, right, out);
  }
  return out;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::scientific << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace sigedge
