#include "sigedge/noise_white.hpp"

#include <cmath>
#include <stdexcept>

#include "sigedge/ball_moments.hpp"

namespace sigedge {

double NormalSource::next() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = y * f;
  has_spare_ = true;
  return x * f;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Image sample_field(const WhiteNoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("sample_field: sigma must be > 0");
  if (spec.rows <= 0 || spec.cols <= 0) {
    throw std::invalid_argument("sample_field: dimensions must be positive");
  }
  Image img(spec.rows, spec.cols);
  NormalSource source(spec.seed);
  for (double& x : img.data()) x = spec.sigma * source.next();
  return img;
}

WhiteLaws white_laws(double sigma, int r) {
  if (!(sigma > 0.0)) throw std::invalid_argument("white_laws: sigma must be > 0");
  const DiscBall ball = enumerate_ball(r);
  const MomentSet m = moments(ball);
  double sq = 0.0;
  for (const auto& p : ball.points) {
    const double w = m.alpha + p.di * p.di + p.dj * p.dj;
    sq += w * w;
  }
  const double s2 = sigma * sigma;
  return {s2 / m.b(), s2 * sq / (m.beta * m.beta), true};
}

double threshold_white(double epsilon, double sigma, int r) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("threshold_white: epsilon must lie in (0, 1)");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("threshold_white: sigma must be > 0");
  const double b = moments(r).b();
  return std::sqrt(-2.0 * sigma * sigma * std::log(epsilon) / b);
}

}  // namespace sigedge
