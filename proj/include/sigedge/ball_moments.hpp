#pragma once

#include <cstdint>
#include <vector>

namespace sigedge {

/// Integer offset inside a disc: `di` is the row offset, `dj` the column offset.
struct Offset {
  int di = 0;
  int dj = 0;
  bool operator==(const Offset&) const = default;
};

/// Lattice points of the closed disc of radius `radius`, row-major order.
struct DiscBall {
  int radius = 0;
  std::vector<Offset> points;

  bool contains(int di, int dj) const noexcept {
    return di * di + dj * dj <= radius * radius;
  }
  /// Largest |dj| on row offset `di` (requires |di| <= radius).
  int half_span(int di) const noexcept;
};

/// Discrete disc moments b_kl = sum of di^k dj^l and the fitting constants
/// derived from them. The first index runs over the row offset, the second
/// over the column offset; odd moments vanish and are not stored.
struct MomentSet {
  int radius = 0;
  double b00 = 0.0;
  double b20 = 0.0;
  double b22 = 0.0;
  double b40 = 0.0;
  double alpha = 0.0;  // -2 b20 / b00
  double beta = 0.0;   // (b40 + b22 - 2 b20^2 / b00) / 2

  double b() const noexcept { return b20; }
};

DiscBall enumerate_ball(int radius);

MomentSet moments(const DiscBall& ball);
MomentSet moments(int radius);

/// Exact integer sum of di^k * dj^l over the ball. Requires k + l <= 8 and
/// radius <= 64 so the accumulation fits in 64 bits.
std::int64_t monomial_sum(const DiscBall& ball, int k, int l);

}  // namespace sigedge
