#pragma once

#include <cstdint>
#include <random>

#include "sigedge/grid.hpp"

namespace sigedge {

/// Reproducible standard-normal source.
///
/// Uniforms are the top 53 bits of std::mt19937_64 (whose output sequence is
/// fixed by the C++ standard) scaled to [0, 1); normals come from the
/// Marsaglia polar method, consuming one accepted pair per two variates.
/// The stream therefore depends only on the seed, not on the standard
/// library implementation.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double next() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent stream seed for sub-stream `index` of `seed`
/// (splitmix64 finalizer over seed + golden-ratio increments).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct WhiteNoiseSpec {
  double sigma = 1.0;
  std::uint64_t seed = 0;
  int rows = 0;
  int cols = 0;
};

/// I.i.d. N(0, sigma^2) image, filled row-major from NormalSource(seed).
Image sample_field(const WhiteNoiseSpec& spec);

/// Joint law of (dI/dx, dI/dy, Laplacian) estimates on white noise: the
/// three are independent centered Gaussians.
struct WhiteLaws {
  double var_grad_component = 0.0;  // sigma^2 / b(r)
  double var_laplacian = 0.0;       // sigma^2 / beta^2 * sum (alpha + i^2 + j^2)^2
  bool gradient_laplacian_independent = true;
};

WhiteLaws white_laws(double sigma, int r);

/// Smallest s with P(|grad_r I| >= s | Laplacian = 0) <= epsilon on white
/// noise: sqrt(-2 sigma^2 ln(epsilon) / b(r)).
double threshold_white(double epsilon, double sigma, int r);

}  // namespace sigedge
