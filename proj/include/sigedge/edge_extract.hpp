#pragma once

#include <span>

#include "sigedge/grid.hpp"
#include "sigedge/local_poly.hpp"

namespace sigedge {

/// Marks a pixel when the Laplacian changes sign strictly between it and its
/// right or lower neighbour and its |value| is the smaller of the pair (ties
/// go to the left/upper pixel). Exact zeros are marked directly. Only pixels
/// inside the field margin are considered.
Mask zero_crossings(const ScalarField& lap);

struct EdgeMap {
  Mask zero_crossing;
  Image contrast_at_crossing;  // contrast where zero_crossing is set, else 0
  Mask significant;            // subset of zero_crossing
  int margin = 0;
};

/// significant = crossing && contrast >= threshold(column). `column_thresholds`
/// must cover every image column.
EdgeMap significant_edges(const Mask& crossings, const Image& contrast,
                          std::span<const double> column_thresholds, int margin);

EdgeMap significant_edges(const Mask& crossings, const Image& contrast, double threshold,
                          int margin);

/// Linear min-max scaling of contrast over crossing pixels to 1..255 (0 off
/// the crossings). `lo`/`hi` receive the scaling range.
Mask contrast_overlay(const EdgeMap& edges, double* lo = nullptr, double* hi = nullptr);

std::size_t count(const Mask& mask) noexcept;

}  // namespace sigedge
