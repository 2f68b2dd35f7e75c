#pragma once

#include <iosfwd>
#include <string>

#include "sigedge/grid.hpp"

namespace sigedge {

/// Axis-aligned ellipse in slice coordinates. `offset` is the column offset of
/// its center from the symmetry axis; a nonzero offset places a mirrored copy
/// on the other side. A shape with a zero semi-axis is absent.
struct Ellipse {
  double center_row = 0.0;
  double offset = 0.0;
  double semi_rows = 0.0;
  double semi_cols = 0.0;

  bool present() const noexcept { return semi_rows > 0.0 && semi_cols > 0.0; }
  bool contains(double row, double axis_distance_signed) const noexcept;
};

/// Material labels, ordered by nesting depth.
enum Material : int { kBackground = 0, kOuter = 1, kCircle = 2, kInner = 3 };

/// Three-density slice: an outer body, one embedded circle and one inner
/// region, mirror-symmetric about the vertical axis between the two middle
/// columns. `slope` adds slope * (distance from the axis) to every material.
struct PhantomSpec {
  int rows = 512;
  int cols = 512;
  double background = 0.0;
  double outer_density = 1.0;
  double circle_density = 0.8;
  double inner_density = 0.3;
  Ellipse body{256.0, 0.0, 215.0, 200.0};
  Ellipse circle{150.0, 0.0, 55.0, 55.0};
  Ellipse inner{345.0, 0.0, 75.0, 130.0};
  double slope = 0.0;

  double axis() const noexcept { return 0.5 * (cols - 1); }
};

PhantomSpec default_phantom();
/// Default geometry with the inhomogeneous slope of 0.002 per pixel.
PhantomSpec sloped_phantom();

/// Throws std::invalid_argument on bad dimensions, negative densities, shapes
/// escaping the body or circle/inner overlap.
Grid<int> label_map(const PhantomSpec& spec);

Image render(const PhantomSpec& spec);

/// Inner boundary of every material: pixels with a 4-neighbour of lower label
/// and different base density.
Mask ground_truth_edges(const PhantomSpec& spec);

/// Key-value config ("key = value", '#' comments). Unknown keys are errors;
/// missing keys keep their defaults.
PhantomSpec parse_phantom_config(std::istream& in);
PhantomSpec load_phantom_config(const std::string& path);
std::string format_phantom_config(const PhantomSpec& spec);

}  // namespace sigedge
