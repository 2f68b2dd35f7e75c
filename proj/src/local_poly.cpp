#include "sigedge/local_poly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigedge {

KernelGrid::KernelGrid(int half) : half_(half) {
  if (half < 0) throw std::invalid_argument("KernelGrid: negative half size");
  w_.assign(static_cast<std::size_t>(side()) * static_cast<std::size_t>(side()), 0.0);
}

double KernelGrid::apply_at(const Image& img, int u, int v) const noexcept {
  double acc = 0.0;
  for (int di = -half_; di <= half_; ++di) {
    const auto row = img.row(u + di);
    const double* w = &w_[index(di, -half_)];
    const double* x = row.data() + (v - half_);
    for (int k = 0; k < side(); ++k) acc += w[k] * x[k];
  }
  return acc;
}

Image correlate(const Image& img, const KernelGrid& kernel) {
  const int h = kernel.half();
  Image out(img.rows(), img.cols(), 0.0);
  if (img.rows() <= 2 * h || img.cols() <= 2 * h) return out;

  const int v0 = h;
  const int v1 = img.cols() - h;
  const int len = v1 - v0;
  for (int u = h; u < img.rows() - h; ++u) {
    double* dst = out.row(u).data() + v0;
    for (int di = -h; di <= h; ++di) {
      const double* src_row = img.row(u + di).data();
      for (int dj = -h; dj <= h; ++dj) {
        const double w = kernel.at(di, dj);
        if (w == 0.0) continue;
        const double* src = src_row + v0 + dj;
        for (int k = 0; k < len; ++k) dst[k] += w * src[k];
      }
    }
  }
  return out;
}

KernelGrid gradient_x_kernel(int r) {
  const DiscBall ball = enumerate_ball(r);
  const MomentSet m = moments(ball);
  KernelGrid k(r);
  for (const auto& p : ball.points) k.at(p.di, p.dj) = p.dj / m.b();
  return k;
}

KernelGrid gradient_y_kernel(int r) {
  const DiscBall ball = enumerate_ball(r);
  const MomentSet m = moments(ball);
  KernelGrid k(r);
  for (const auto& p : ball.points) k.at(p.di, p.dj) = p.di / m.b();
  return k;
}

KernelGrid laplacian_kernel(int r) {
  const DiscBall ball = enumerate_ball(r);
  const MomentSet m = moments(ball);
  KernelGrid k(r);
  for (const auto& p : ball.points) {
    k.at(p.di, p.dj) = (m.alpha + p.di * p.di + p.dj * p.dj) / m.beta;
  }
  return k;
}

ContrastKernel::ContrastKernel(ContrastKind kind, int r1, int r2)
    : kind_(kind), r1_(r1), r2_(r2), coeff_(r2), kx_(r2), ky_(r2), klap_(r2) {
  const DiscBall inner = enumerate_ball(r1);
  const double inv_b1 = 1.0 / moments(inner).b();
  for (const auto& p : inner.points) coeff_.at(p.di, p.dj) += inv_b1;
  if (kind == ContrastKind::c2) {
    const DiscBall outer = enumerate_ball(r2);
    const double inv_b2 = 1.0 / moments(outer).b();
    for (const auto& p : outer.points) coeff_.at(p.di, p.dj) -= inv_b2;
  }
  for (int di = -r2; di <= r2; ++di) {
    for (int dj = -r2; dj <= r2; ++dj) {
      kx_.at(di, dj) = dj * coeff_.at(di, dj);
      ky_.at(di, dj) = di * coeff_.at(di, dj);
    }
  }
  klap_ = laplacian_kernel(r2);
  lap_moments_ = moments(r2);
}

ContrastKernel ContrastKernel::c1(int r) {
  if (r < 1) throw std::invalid_argument("C1 kernel: radius must be >= 1");
  return ContrastKernel(ContrastKind::c1, r, r);
}

ContrastKernel ContrastKernel::c2(int r1, int r2) {
  if (r1 < 1 || r2 <= r1) {
    throw std::invalid_argument("C2 kernel: need 1 <= r1 < r2, got r1=" + std::to_string(r1) +
                                " r2=" + std::to_string(r2));
  }
  return ContrastKernel(ContrastKind::c2, r1, r2);
}

std::string ContrastKernel::describe() const {
  if (kind_ == ContrastKind::c1) return "C1(" + std::to_string(r1_) + ")";
  return "C2(" + std::to_string(r1_) + "," + std::to_string(r2_) + ")";
}

void require_fits(const Image& img, int r, const char* what) {
  if (r < 1) throw std::invalid_argument(std::string(what) + ": radius must be >= 1");
  if (img.rows() <= 2 * r + 1 || img.cols() <= 2 * r + 1) {
    throw std::invalid_argument(std::string(what) + ": image " + std::to_string(img.rows()) +
                                "x" + std::to_string(img.cols()) +
                                " too small for radius " + std::to_string(r));
  }
}

GradientField gradient_field(const Image& img, int r) {
  require_fits(img, r, "gradient_field");
  return {correlate(img, gradient_x_kernel(r)), correlate(img, gradient_y_kernel(r)), r};
}

ScalarField laplacian_field(const Image& img, int r) {
  require_fits(img, r, "laplacian_field");
  return {correlate(img, laplacian_kernel(r)), r};
}

DerivativeFields derivative_fields(const Image& img, int r) {
  auto g = gradient_field(img, r);
  auto l = laplacian_field(img, r);
  return {std::move(g.gx), std::move(g.gy), std::move(l.values), r};
}

ContrastField contrast_field(const Image& img, const ContrastKernel& kernel) {
  require_fits(img, kernel.half(), "contrast_field");
  ContrastField f;
  f.cx = correlate(img, kernel.x_kernel());
  f.cy = correlate(img, kernel.y_kernel());
  f.c = Image(img.rows(), img.cols(), 0.0);
  auto& c = f.c.data();
  const auto& cx = f.cx.data();
  const auto& cy = f.cy.data();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::hypot(cx[k], cy[k]);
  f.margin = kernel.half();
  return f;
}

}  // namespace sigedge
