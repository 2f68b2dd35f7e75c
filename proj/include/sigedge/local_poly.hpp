#pragma once

#include <string>
#include <vector>

#include "sigedge/ball_moments.hpp"
#include "sigedge/grid.hpp"

namespace sigedge {

/// Correlation weights on the square [-half, half]^2. Applying it at pixel
/// (u, v) yields sum of w(di, dj) * img(u + di, v + dj).
class KernelGrid {
 public:
  KernelGrid() = default;
  explicit KernelGrid(int half);

  int half() const noexcept { return half_; }
  int side() const noexcept { return 2 * half_ + 1; }

  double& at(int di, int dj) noexcept { return w_[index(di, dj)]; }
  double at(int di, int dj) const noexcept { return w_[index(di, dj)]; }

  /// Applies the kernel at a single pixel; the caller guarantees the support
  /// lies inside the image.
  double apply_at(const Image& img, int u, int v) const noexcept;

 private:
  std::size_t index(int di, int dj) const noexcept {
    return static_cast<std::size_t>(di + half_) * static_cast<std::size_t>(side()) +
           static_cast<std::size_t>(dj + half_);
  }

  int half_ = 0;
  std::vector<double> w_;
};

/// Correlates `img` with `kernel` on every pixel at distance >= kernel.half()
/// from the border; other pixels are left at 0.
Image correlate(const Image& img, const KernelGrid& kernel);

/// Weights of the degree-2 least-squares fit on B_r.
KernelGrid gradient_x_kernel(int r);  // dj / b(r)
KernelGrid gradient_y_kernel(int r);  // di / b(r)
KernelGrid laplacian_kernel(int r);   // (alpha(r) + di^2 + dj^2) / beta(r)

enum class ContrastKind { c1, c2 };

/// Contrast coefficients c_ij together with the derived C_x, C_y and
/// Laplacian kernels. C1(r) is the gradient norm at radius r; C2(r1, r2) is
/// the norm of the difference of gradient estimates at r1 < r2, with the
/// Laplacian taken at r2.
class ContrastKernel {
 public:
  static ContrastKernel c1(int r);
  static ContrastKernel c2(int r1, int r2);

  ContrastKind kind() const noexcept { return kind_; }
  int inner_radius() const noexcept { return r1_; }
  int outer_radius() const noexcept { return r2_; }
  int laplacian_radius() const noexcept { return r2_; }
  int half() const noexcept { return r2_; }

  double coefficient(int di, int dj) const noexcept { return coeff_.at(di, dj); }
  const KernelGrid& coefficients() const noexcept { return coeff_; }
  const KernelGrid& x_kernel() const noexcept { return kx_; }
  const KernelGrid& y_kernel() const noexcept { return ky_; }
  const KernelGrid& lap_kernel() const noexcept { return klap_; }
  const MomentSet& laplacian_moments() const noexcept { return lap_moments_; }

  /// "C1(12)" or "C2(6,12)".
  std::string describe() const;

 private:
  ContrastKernel(ContrastKind kind, int r1, int r2);

  ContrastKind kind_ = ContrastKind::c1;
  int r1_ = 0;
  int r2_ = 0;
  KernelGrid coeff_;
  KernelGrid kx_;
  KernelGrid ky_;
  KernelGrid klap_;
  MomentSet lap_moments_;
};

/// Fields are stored full size; values are meaningful only at distance >=
/// margin from every border.
struct GradientField {
  Image gx;
  Image gy;
  int margin = 0;
};

struct ScalarField {
  Image values;
  int margin = 0;

  bool defined(int u, int v) const noexcept {
    return u >= margin && v >= margin && u < values.rows() - margin &&
           v < values.cols() - margin;
  }
};

struct ContrastField {
  Image cx;
  Image cy;
  Image c;
  int margin = 0;
};

struct DerivativeFields {
  Image gx;
  Image gy;
  Image lap;
  int margin = 0;
};

GradientField gradient_field(const Image& img, int r);
ScalarField laplacian_field(const Image& img, int r);
DerivativeFields derivative_fields(const Image& img, int r);
ContrastField contrast_field(const Image& img, const ContrastKernel& kernel);

/// Throws std::invalid_argument unless both dimensions exceed 2r + 1.
void require_fits(const Image& img, int r, const char* what);

}  // namespace sigedge
