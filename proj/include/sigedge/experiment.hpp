#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigedge/edge_extract.hpp"
#include "sigedge/local_poly.hpp"
#include "sigedge/noise_tomo.hpp"
#include "sigedge/phantom.hpp"

namespace sigedge {

/// Invalid experiment parameter; `field()` names the offending config key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Pipeline { white, tomo };

struct KernelSpec {
  ContrastKind kind = ContrastKind::c1;
  int r1 = 12;
  int r2 = 12;

  static KernelSpec c1(int r) { return {ContrastKind::c1, r, r}; }
  static KernelSpec c2(int r1, int r2) { return {ContrastKind::c2, r1, r2}; }
  /// "c1:12" or "c2:6,12".
  static KernelSpec parse(const std::string& text);

  ContrastKernel make() const;
  std::string tag() const;  // "c1_12", "c2_6_12"
};

struct ExperimentConfig {
  std::string preset;
  Pipeline pipeline = Pipeline::white;
  double sigma = 0.2;
  double epsilon = 1e-5;
  std::vector<KernelSpec> kernels{KernelSpec::c1(12)};
  std::uint64_t seed = 1;
  std::string phantom_path;  // empty: `phantom` is used as is
  PhantomSpec phantom;
  double pixel_pitch = 0.5;  // radiograph sample spacing, tomo pipeline only
  TailMode mode = TailMode::exact_tail;
  std::string output_dir;
};

/// Checks every field against module preconditions; throws ConfigError.
/// Loads `phantom_path` into `phantom` when set.
ExperimentConfig resolve(ExperimentConfig cfg);

/// Named presets: fig5, fig6, fig7, fig9, fig10-12.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Detection quality against ground truth. Truth pixels closer than
/// `exclude_margin` to the border are ignored for coverage.
struct EdgeMetrics {
  std::size_t truth_pixels = 0;
  std::size_t covered_truth = 0;    // a detection within 2 px
  std::size_t significant = 0;
  std::size_t far_detections = 0;   // farther than 5 px from every truth pixel
  std::size_t matched = 0;          // detections within 5 px of truth
  double coverage = 0.0;
  double mean_localization = 0.0;   // mean truth distance over matched detections
  std::size_t gap_pixels() const noexcept { return truth_pixels - covered_truth; }
};

EdgeMetrics evaluate_edges(const Mask& significant, const Mask& truth, int exclude_margin);

/// Contrast + Laplacian fields, zero-crossings and significance masking.
EdgeMap detect_edges(const Image& img, const ContrastKernel& kernel,
                     std::span<const double> column_thresholds);

/// White-noise significance threshold for any kernel: closed form for C1,
/// identity-covariance law for C2.
double white_threshold(const ContrastKernel& kernel, double sigma, double epsilon);

struct Detection {
  KernelSpec kernel;
  std::vector<double> thresholds;  // per column
  EdgeMap edges;
  EdgeMetrics metrics;
  double overlay_lo = 0.0;
  double overlay_hi = 0.0;
};

struct ExperimentBundle {
  ExperimentConfig config;
  Image phantom;
  Image radiograph;        // tomo only
  Image noisy_radiograph;  // tomo only
  Image observed;          // noisy image (white) or reconstruction (tomo)
  std::vector<ThresholdProfile> profiles;  // tomo only, one per kernel
  std::vector<Detection> detections;
};

ExperimentBundle run_white_experiment(const ExperimentConfig& cfg);
ExperimentBundle run_tomo_experiment(const ExperimentConfig& cfg);
ExperimentBundle run_experiment(const ExperimentConfig& cfg);

/// Threshold profile for the first configured kernel. White pipelines use the
/// identity operator.
ThresholdProfile compute_thresholds(const ExperimentConfig& cfg);

/// Writes images, masks, CSV profiles, metrics and a manifest to `dir`.
void write_bundle(const ExperimentBundle& bundle, const std::string& dir);

std::string manifest_json(const ExperimentBundle& bundle);

}  // namespace sigedge
