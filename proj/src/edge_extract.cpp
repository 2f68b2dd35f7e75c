#include "sigedge/edge_extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigedge {

namespace {

bool opposite_signs(double a, double b) noexcept {
  return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0);
}

// Marks whichever endpoint of a strict sign change has the smaller magnitude.
void attribute(Mask& mask, const Image& lap, int u, int v, int un, int vn) {
  const double a = lap(u, v);
  const double b = lap(un, vn);
  if (!opposite_signs(a, b)) return;
  if (std::abs(a) <= std::abs(b)) {
    mask(u, v) = 1;
  } else {
    mask(un, vn) = 1;
  }
}

}  // namespace

Mask zero_crossings(const ScalarField& lap) {
  const Image& l = lap.values;
  Mask mask(l.rows(), l.cols(), 0);
  const int m = lap.margin;
  const int u_end = l.rows() - m;
  const int v_end = l.cols() - m;
  for (int u = m; u < u_end; ++u) {
    for (int v = m; v < v_end; ++v) {
      if (l(u, v) == 0.0) mask(u, v) = 1;
      if (v + 1 < v_end) attribute(mask, l, u, v, u, v + 1);
      if (u + 1 < u_end) attribute(mask, l, u, v, u + 1, v);
    }
  }
  return mask;
}

EdgeMap significant_edges(const Mask& crossings, const Image& contrast,
                          std::span<const double> column_thresholds, int margin) {
  require_same_shape(crossings, contrast, "significant_edges");
  if (column_thresholds.size() != static_cast<std::size_t>(contrast.cols())) {
    throw std::invalid_argument("significant_edges: threshold profile width differs from image");
  }
  EdgeMap out;
  out.zero_crossing = crossings;
  out.contrast_at_crossing = Image(contrast.rows(), contrast.cols(), 0.0);
  out.significant = Mask(contrast.rows(), contrast.cols(), 0);
  out.margin = margin;
  for (int u = 0; u < contrast.rows(); ++u) {
    for (int v = 0; v < contrast.cols(); ++v) {
      if (!crossings(u, v)) continue;
      const double c = contrast(u, v);
      out.contrast_at_crossing(u, v) = c;
      if (c >= column_thresholds[static_cast<std::size_t>(v)]) out.significant(u, v) = 1;
    }
  }
  return out;
}

EdgeMap significant_edges(const Mask& crossings, const Image& contrast, double threshold,
                          int margin) {
  const std::vector<double> flat(static_cast<std::size_t>(contrast.cols()), threshold);
  return significant_edges(crossings, contrast, flat, margin);
}

Mask contrast_overlay(const EdgeMap& edges, double* lo, double* hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  const auto& z = edges.zero_crossing.data();
  const auto& c = edges.contrast_at_crossing.data();
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!z[k]) continue;
    mn = std::min(mn, c[k]);
    mx = std::max(mx, c[k]);
  }
  Mask out(edges.zero_crossing.rows(), edges.zero_crossing.cols(), 0);
  if (mn > mx) {
    mn = mx = 0.0;
  } else {
    const double span = mx > mn ? mx - mn : 1.0;
    auto& o = out.data();
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (!z[k]) continue;
      o[k] = static_cast<std::uint8_t>(1 + std::lround(254.0 * (c[k] - mn) / span));
    }
  }
  if (lo) *lo = mn;
  if (hi) *hi = mx;
  return out;
}

std::size_t count(const Mask& mask) noexcept {
  return static_cast<std::size_t>(std::count_if(mask.data().begin(), mask.data().end(),
                                                [](std::uint8_t x) { return x != 0; }));
}

}  // namespace sigedge
