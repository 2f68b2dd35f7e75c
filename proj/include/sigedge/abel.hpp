#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "sigedge/grid.hpp"

namespace sigedge {

/// Full-width slice of a radially symmetric object. The symmetry axis lies
/// between columns n-1 and n; cell index d(v) counts pixels away from it.
struct SliceGeometry {
  int half_width = 0;

  int full_width() const noexcept { return 2 * half_width; }
  double axis() const noexcept { return half_width - 0.5; }
  bool right_side(int col) const noexcept { return col >= half_width; }
  /// Cell index along the radius: 0 for the two columns adjacent to the axis.
  int cell(int col) const noexcept {
    return col >= half_width ? col - half_width : half_width - 1 - col;
  }
  /// Distance (in pixels) from the axis to the center of column `col`.
  double distance(int col) const noexcept { return cell(col) + 0.5; }
};

/// Discrete Abel projection H and its inverse M for one half-row.
///
/// The object is piecewise constant on cells [j, j+1) * pitch, rays sit at
/// u_k = (k + 1/2) * pitch and the cell integrals are taken exactly, so
/// H(k, j) = 2 pitch (sqrt((j+1)^2 - u^2) - sqrt(max(j, u)^2 - u^2)) with u in
/// pixel units, zero for j < k. H is upper triangular with a positive
/// diagonal and M is obtained by back substitution. Column vectors are used
/// throughout: radiograph = H * profile, profile = M * radiograph.
class AbelOperator {
 public:
  int half_width() const noexcept { return static_cast<int>(h_.rows()); }
  double pitch() const noexcept { return pitch_; }
  SliceGeometry geometry() const noexcept { return {half_width()}; }

  const Eigen::MatrixXd& projection() const noexcept { return h_; }
  const Eigen::MatrixXd& inverse() const noexcept { return m_; }

  /// ||row j of M||_2: standard deviation of reconstructed cell j per unit
  /// radiograph noise.
  std::vector<double> noise_amplification() const;

  friend AbelOperator build_operator(int n, double pitch);

 private:
  Eigen::MatrixXd h_;
  Eigen::MatrixXd m_;
  double pitch_ = 1.0;
};

AbelOperator build_operator(int n, double pitch = 1.0);

/// Inverts an upper-triangular matrix with nonzero diagonal column by column.
Eigen::MatrixXd invert_upper_triangular(const Eigen::MatrixXd& upper);

/// Projects every row: H is applied to the right-half profile and the result
/// is mirrored onto the left half.
Image radiograph(const Image& slice, const AbelOperator& op);

/// Reconstructs every row, each half independently with the same M.
Image reconstruct(const Image& radiograph, const AbelOperator& op);

/// Row-major CSV, full-precision scientific notation.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace sigedge
