#include "sigedge/noise_tomo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace sigedge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative gap below which the two variances are treated as equal; the
// resulting tail error is second order in the gap.
constexpr double kEqualVarianceTol = 1e-9;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kEqualVarianceTol * (a + b);
}

void check_variances(double var1, double var2, const char* what) {
  if (!(var1 >= 0.0) || !(var2 >= 0.0)) {
    throw std::invalid_argument(std::string(what) + ": variances must be >= 0");
  }
}

// P(X^2 + Y^2 >= s^2) for independent X ~ N(0, vx), Y ~ N(0, vy), both > 0.
// Splits on |X| >= s and substitutes x = s sin(t) on the remaining interval,
// which removes the square-root endpoint behaviour of the integrand.
double exact_tail(double s, double vx, double vy) {
  const double tail_x = std::erfc(s / std::sqrt(2.0 * vx));
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * vx);
  const double sy = std::sqrt(2.0 * vy);
  auto integrand = [&](double t) {
    const double x = s * std::sin(t);
    const double c = s * std::cos(t);
    return norm * std::exp(-x * x / (2.0 * vx)) * std::erfc(c / sy) * c;
  };
  double err = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numbers::pi / 2.0, 20, 1e-13, &err);
  return std::clamp(tail_x + 2.0 * body, 0.0, 1.0);
}

}  // namespace

ColumnCovariance::ColumnCovariance(Eigen::MatrixXd gamma, int half_width)
    : gamma_(std::move(gamma)), n_(half_width) {
  if (gamma_.rows() != n_ || gamma_.cols() != n_) {
    throw std::invalid_argument("ColumnCovariance: gamma must be n x n");
  }
}

ColumnCovariance column_covariance(const Eigen::MatrixXd& reconstruction, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("column_covariance: sigma must be > 0");
  if (reconstruction.rows() != reconstruction.cols()) {
    throw std::invalid_argument("column_covariance: reconstruction matrix must be square");
  }
  Eigen::MatrixXd gamma = sigma * sigma * (reconstruction * reconstruction.transpose());
  // Exact symmetry regardless of the product's rounding.
  gamma = 0.5 * (gamma + gamma.transpose()).eval();
  return ColumnCovariance(std::move(gamma), static_cast<int>(reconstruction.rows()));
}

ColumnCovariance column_covariance(const AbelOperator& op, double sigma) {
  return column_covariance(op.inverse(), sigma);
}

ContrastLaw contrast_law(const ColumnCovariance& cov, const ContrastKernel& kernel, int column) {
  const int h = kernel.half();
  if (column - h < 0 || column + h >= cov.full_width()) {
    throw std::out_of_range("contrast_law: column " + std::to_string(column) +
                            " not evaluable for " + kernel.describe());
  }
  const int side = 2 * h + 1;
  Eigen::MatrixXd g(side, side);
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) g(a, b) = cov.covariance(column - h + a, column - h + b);
  }
  // Row i of each matrix holds the kernel weights on row offset i - h.
  Eigen::MatrixXd kx(side, side), ky(side, side), kl(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      kx(i, j) = kernel.x_kernel().at(i - h, j - h);
      ky(i, j) = kernel.y_kernel().at(i - h, j - h);
      kl(i, j) = kernel.lap_kernel().at(i - h, j - h);
    }
  }
  // Distinct rows are independent, so each moment is a sum over row offsets
  // of k_i^T G k_i.
  const Eigen::MatrixXd gx = kx * g;
  const Eigen::MatrixXd gl = kl * g;

  ContrastLaw law;
  law.column = column;
  law.sigma_x2 = gx.cwiseProduct(kx).sum();
  law.sigma_y2 = (ky * g).cwiseProduct(ky).sum();
  law.sigma_delta2 = gl.cwiseProduct(kl).sum();
  law.sigma_x_delta = gx.cwiseProduct(kl).sum();
  law.d2 = std::max(0.0, law.sigma_x2 * law.sigma_delta2 - law.sigma_x_delta * law.sigma_x_delta);
  law.sigma_x_cond2 = law.sigma_delta2 > 0.0 ? law.d2 / law.sigma_delta2
                                             : std::numeric_limits<double>::quiet_NaN();
  return law;
}

double conditional_variance(const ContrastLaw& law) {
  if (!(law.sigma_delta2 > 0.0)) {
    throw DegenerateLawError("conditional_variance: Laplacian variance is zero at column " +
                             std::to_string(law.column));
  }
  if (law.d2 <= 0.0) return 0.0;
  return law.d2 / law.sigma_delta2;
}

const char* to_string(TailMode mode) noexcept {
  return mode == TailMode::paper_gamma ? "paper_gamma" : "exact_tail";
}

TailMode tail_mode_from_string(const std::string& name) {
  if (name == "paper_gamma" || name == "gamma") return TailMode::paper_gamma;
  if (name == "exact_tail" || name == "exact") return TailMode::exact_tail;
  throw std::invalid_argument("unknown tail mode '" + name + "'");
}

double tail_probability(double s, double var1, double var2, TailMode mode) {
  check_variances(var1, var2, "tail_probability");
  if (var1 == 0.0 && var2 == 0.0) {
    throw std::invalid_argument("tail_probability: both variances are zero");
  }
  if (!(s >= 0.0)) throw std::invalid_argument("tail_probability: s must be >= 0");
  if (s == 0.0) return 1.0;

  if (mode == TailMode::paper_gamma || nearly_equal(var1, var2)) {
    return std::exp(-s * s / (var1 + var2));
  }
  if (var1 == 0.0 || var2 == 0.0) {
    return std::erfc(s / std::sqrt(2.0 * std::max(var1, var2)));
  }
  return exact_tail(s, std::max(var1, var2), std::min(var1, var2));
}

double solve_threshold(double epsilon, double var1, double var2, TailMode mode) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("solve_threshold: epsilon must lie in (0, 1)");
  }
  check_variances(var1, var2, "solve_threshold");
  if (var1 == 0.0 && var2 == 0.0) return 0.0;

  const double log_inv = -std::log(epsilon);
  if (mode == TailMode::paper_gamma || nearly_equal(var1, var2)) {
    return std::sqrt((var1 + var2) * log_inv);
  }
  const double vmax = std::max(var1, var2);
  const double vmin = std::min(var1, var2);
  if (vmin == 0.0) {
    return std::sqrt(2.0 * vmax) * boost::math::erfc_inv(epsilon);
  }
  // vmin chi2(2) <= X^2 + Y^2 <= vmax chi2(2) stochastically brackets the root.
  double lo = std::sqrt(2.0 * vmin * log_inv);
  double hi = std::sqrt(2.0 * vmax * log_inv);
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_probability(mid, var1, var2, mode) <= epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ThresholdProfile threshold_profile(const ColumnCovariance& cov, const ContrastKernel& kernel,
                                   double epsilon, TailMode mode) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("threshold_profile: epsilon must lie in (0, 1)");
  }
  ThresholdProfile p;
  p.margin = kernel.half();
  const int width = cov.full_width();
  for (int v = p.margin; v < width - p.margin; ++v) p.laws.push_back(contrast_law(cov, kernel, v));
  p.thresholds.assign(static_cast<std::size_t>(width), kInf);
  return rethreshold(p, epsilon, mode);
}

ThresholdProfile rethreshold(const ThresholdProfile& base, double epsilon, TailMode mode) {
  ThresholdProfile p = base;
  p.epsilon = epsilon;
  p.mode = mode;
  for (const auto& law : p.laws) {
    const double cond = conditional_variance(law);
    p.thresholds[static_cast<std::size_t>(law.column)] =
        solve_threshold(epsilon, law.sigma_y2, cond, mode);
  }
  return p;
}

void write_profile_csv(std::ostream& os, const ThresholdProfile& profile) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << "column_index,sigma_x2,sigma_y2,sigma_delta2,sigma_x_delta,sigma_x_cond2,threshold\n";
  os << std::scientific << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& law : profile.laws) {
    os << law.column << ',' << law.sigma_x2 << ',' << law.sigma_y2 << ',' << law.sigma_delta2
       << ',' << law.sigma_x_delta << ',' << law.sigma_x_cond2 << ','
       << profile.at(law.column) << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace sigedge
