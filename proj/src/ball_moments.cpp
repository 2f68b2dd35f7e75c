#include "sigedge/ball_moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigedge {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t out = 1;
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

}  // namespace

int DiscBall::half_span(int di) const noexcept {
  int w = 0;
  while ((w + 1) * (w + 1) + di * di <= radius * radius) ++w;
  return w;
}

DiscBall enumerate_ball(int radius) {
  if (radius < 1) {
    throw std::invalid_argument("enumerate_ball: radius must be >= 1, got " +
                                std::to_string(radius));
  }
  DiscBall ball;
  ball.radius = radius;
  const int r2 = radius * radius;
  for (int di = -radius; di <= radius; ++di) {
    for (int dj = -radius; dj <= radius; ++dj) {
      if (di * di + dj * dj <= r2) ball.points.push_back({di, dj});
    }
  }
  return ball;
}

std::int64_t monomial_sum(const DiscBall& ball, int k, int l) {
  if (k < 0 || l < 0 || k + l > 8 || ball.radius > 64) {
    throw std::invalid_argument("monomial_sum: exponent or radius out of range");
  }
  std::int64_t sum = 0;
  for (const auto& p : ball.points) sum += ipow(p.di, k) * ipow(p.dj, l);
  return sum;
}

MomentSet moments(const DiscBall& ball) {
  if (ball.radius < 1 || ball.points.empty()) {
    throw std::invalid_argument("moments: invalid ball");
  }
  const auto b00 = monomial_sum(ball, 0, 0);
  const auto b20 = monomial_sum(ball, 2, 0);
  const auto b22 = monomial_sum(ball, 2, 2);
  const auto b40 = monomial_sum(ball, 4, 0);

  MomentSet m;
  m.radius = ball.radius;
  m.b00 = static_cast<double>(b00);
  m.b20 = static_cast<double>(b20);
  m.b22 = static_cast<double>(b22);
  m.b40 = static_cast<double>(b40);
  m.alpha = -2.0 * m.b20 / m.b00;
  // b40 + b22 - 2 b20^2 / b00 == (b00 (b40 + b22) - 2 b20^2) / b00, numerator exact.
  const std::int64_t num = b00 * (b40 + b22) - 2 * b20 * b20;
  m.beta = 0.5 * static_cast<double>(num) / m.b00;
  return m;
}

MomentSet moments(int radius) { return moments(enumerate_ball(radius)); }

}  // namespace sigedge
