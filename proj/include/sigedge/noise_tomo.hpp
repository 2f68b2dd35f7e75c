#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sigedge/abel.hpp"
#include "sigedge/local_poly.hpp"

namespace sigedge {

/// Raised when the Laplacian estimate has zero variance, so conditioning on
/// a zero-crossing is undefined.
class DegenerateLawError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance of one reconstructed row. Within a half the covariance between
/// cells j and l is gamma(j, l) = sigma^2 (M M^T)(j, l); the two halves are
/// independent. Rows are independent and share the same law.
class ColumnCovariance {
 public:
  ColumnCovariance(Eigen::MatrixXd gamma, int half_width);

  int half_width() const noexcept { return n_; }
  int full_width() const noexcept { return 2 * n_; }
  const Eigen::MatrixXd& gamma() const noexcept { return gamma_; }

  /// Cov(col a, col b) for full-width column indices.
  double covariance(int col_a, int col_b) const noexcept {
    const SliceGeometry g{n_};
    if (g.right_side(col_a) != g.right_side(col_b)) return 0.0;
    return gamma_(g.cell(col_a), g.cell(col_b));
  }

 private:
  Eigen::MatrixXd gamma_;
  int n_ = 0;
};

ColumnCovariance column_covariance(const AbelOperator& op, double sigma);
/// Same propagation for an arbitrary per-half reconstruction matrix
/// (profile = matrix * radiograph); the identity gives white noise.
ColumnCovariance column_covariance(const Eigen::MatrixXd& reconstruction, double sigma);

/// Second moments of (C_x, C_y, Laplacian) at one column. E[C_x C_y] and
/// E[C_y Laplacian] vanish identically for symmetric kernels and are not kept.
struct ContrastLaw {
  int column = 0;
  double sigma_x2 = 0.0;
  double sigma_y2 = 0.0;
  double sigma_delta2 = 0.0;
  double sigma_x_delta = 0.0;
  double d2 = 0.0;             // sigma_x2 sigma_delta2 - sigma_x_delta^2, clamped at 0
  double sigma_x_cond2 = 0.0;  // d2 / sigma_delta2; NaN when sigma_delta2 == 0
};

/// Throws std::out_of_range when the kernel support at `column` leaves the image.
ContrastLaw contrast_law(const ColumnCovariance& cov, const ContrastKernel& kernel, int column);

/// Variance of C_x given Laplacian == 0.
double conditional_variance(const ContrastLaw& law);

enum class TailMode {
  paper_gamma,  // exp(-s^2 / (var1 + var2)), the equal-variance law
  exact_tail,   // P(X^2 + Y^2 >= s^2) for X ~ N(0, var1), Y ~ N(0, var2)
};

const char* to_string(TailMode mode) noexcept;
TailMode tail_mode_from_string(const std::string& name);

double tail_probability(double s, double var1, double var2, TailMode mode);

/// Smallest s with tail_probability(s, var1, var2, mode) <= epsilon.
double solve_threshold(double epsilon, double var1, double var2, TailMode mode);

/// Per-column significance thresholds for a full-width image. Columns within
/// the kernel margin of the border are not evaluable and hold +inf.
struct ThresholdProfile {
  double epsilon = 0.0;
  TailMode mode = TailMode::exact_tail;
  int margin = 0;
  std::vector<ContrastLaw> laws;    // one per evaluable column, in column order
  std::vector<double> thresholds;   // full width

  double at(int column) const { return thresholds.at(static_cast<std::size_t>(column)); }
  bool evaluable(int column) const noexcept {
    return column >= margin && column < static_cast<int>(thresholds.size()) - margin;
  }
};

ThresholdProfile threshold_profile(const ColumnCovariance& cov, const ContrastKernel& kernel,
                                   double epsilon, TailMode mode = TailMode::exact_tail);

/// Recomputes only the thresholds of an existing profile for another epsilon
/// or mode; the laws do not depend on either.
ThresholdProfile rethreshold(const ThresholdProfile& base, double epsilon, TailMode mode);

/// CSV: column_index,sigma_x2,sigma_y2,sigma_delta2,sigma_x_delta,sigma_x_cond2,threshold
void write_profile_csv(std::ostream& os, const ThresholdProfile& profile);

}  // namespace sigedge
