#include "sigedge/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sigedge/abel.hpp"
#include "sigedge/image_io.hpp"
#include "sigedge/noise_white.hpp"

namespace sigedge {

namespace {

constexpr const char* kVersion = "sigedge 1.0.0";
constexpr double kCoverRadius = 2.0;
constexpr double kMatchRadius = 5.0;

const char* pipeline_name(Pipeline p) { return p == Pipeline::white ? "white" : "tomo"; }

// Squared distance from (u, v) to the nearest set pixel of `mask`, searching
// a window of half-size `reach`; returns +inf if none is found.
double nearest_sq(const Mask& mask, int u, int v, int reach) {
  double best = std::numeric_limits<double>::infinity();
  const int u0 = std::max(0, u - reach), u1 = std::min(mask.rows() - 1, u + reach);
  const int v0 = std::max(0, v - reach), v1 = std::min(mask.cols() - 1, v + reach);
  for (int a = u0; a <= u1; ++a) {
    for (int b = v0; b <= v1; ++b) {
      if (!mask(a, b)) continue;
      const double d = static_cast<double>((a - u) * (a - u) + (b - v) * (b - v));
      best = std::min(best, d);
    }
  }
  return best;
}

Image add(const Image& a, const Image& b) {
  Image out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += b.data()[k];
  return out;
}

nlohmann::json metrics_json(const EdgeMetrics& m) {
  return {{"truth_pixels", m.truth_pixels},
          {"covered_truth_within_2px", m.covered_truth},
          {"coverage", m.coverage},
          {"gap_pixels", m.gap_pixels()},
          {"significant_pixels", m.significant},
          {"far_detections_over_5px", m.far_detections},
          {"matched_detections", m.matched},
          {"mean_localization_px", m.mean_localization}};
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("kernel", "expected c1:<r> or c2:<r1>,<r2>");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  try {
    if (kind == "c1" || kind == "C1") return c1(std::stoi(args));
    if (kind == "c2" || kind == "C2") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw ConfigError("kernel", "c2 needs two radii");
      return c2(std::stoi(args.substr(0, comma)), std::stoi(args.substr(comma + 1)));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("kernel", "bad radius in '" + text + "'");
  }
  throw ConfigError("kernel", "unknown contrast kind '" + kind + "'");
}

ContrastKernel KernelSpec::make() const {
  return kind == ContrastKind::c1 ? ContrastKernel::c1(r1) : ContrastKernel::c2(r1, r2);
}

std::string KernelSpec::tag() const {
  if (kind == ContrastKind::c1) return "c1_" + std::to_string(r1);
  return "c2_" + std::to_string(r1) + "_" + std::to_string(r2);
}

ExperimentConfig resolve(ExperimentConfig cfg) {
  if (!(cfg.sigma > 0.0)) throw ConfigError("sigma", "must be > 0");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
  if (cfg.kernels.empty()) throw ConfigError("kernel", "at least one kernel is required");
  if (!(cfg.pixel_pitch > 0.0)) throw ConfigError("pixel_pitch", "must be > 0");
  if (!cfg.phantom_path.empty()) {
    if (!std::filesystem::exists(cfg.phantom_path)) {
      throw ConfigError("phantom", "file '" + cfg.phantom_path + "' does not exist");
    }
    try {
      cfg.phantom = load_phantom_config(cfg.phantom_path);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("phantom", e.what());
    }
  }
  try {
    (void)label_map(cfg.phantom);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("phantom", e.what());
  }
  for (const auto& k : cfg.kernels) {
    if (k.r1 < 1 || (k.kind == ContrastKind::c2 && k.r2 <= k.r1)) {
      throw ConfigError("kernel", "radii must satisfy 1 <= r1 (< r2 for c2)");
    }
    const int half = k.kind == ContrastKind::c1 ? k.r1 : k.r2;
    if (cfg.phantom.rows <= 2 * half + 1 || cfg.phantom.cols <= 2 * half + 1) {
      throw ConfigError("kernel", "radius " + std::to_string(half) + " too large for the image");
    }
  }
  return cfg;
}

std::vector<std::string> preset_names() { return {"fig5", "fig6", "fig7", "fig9", "fig10-12"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "fig5" || name == "fig6") {
    cfg.pipeline = Pipeline::white;
    cfg.sigma = name == "fig5" ? 0.2 : 0.4;
    cfg.kernels = {KernelSpec::c1(12)};
  } else if (name == "fig7") {
    cfg.pipeline = Pipeline::tomo;
    cfg.sigma = 4.0;
    cfg.kernels = {KernelSpec::c1(12)};
  } else if (name == "fig9") {
    cfg.pipeline = Pipeline::tomo;
    cfg.sigma = 4.0;
    cfg.kernels = {KernelSpec::c1(6), KernelSpec::c1(12), KernelSpec::c1(20)};
  } else if (name == "fig10-12") {
    cfg.pipeline = Pipeline::tomo;
    cfg.sigma = 1.0;
    cfg.phantom = sloped_phantom();
    cfg.kernels = {KernelSpec::c1(12), KernelSpec::c2(6, 12)};
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  return cfg;
}

EdgeMetrics evaluate_edges(const Mask& significant, const Mask& truth, int exclude_margin) {
  require_same_shape(significant, truth, "evaluate_edges");
  EdgeMetrics m;
  const int reach = static_cast<int>(kMatchRadius) + 1;
  double loc_sum = 0.0;
  for (int u = 0; u < truth.rows(); ++u) {
    for (int v = 0; v < truth.cols(); ++v) {
      if (truth(u, v) && u >= exclude_margin && v >= exclude_margin &&
          u < truth.rows() - exclude_margin && v < truth.cols() - exclude_margin) {
        ++m.truth_pixels;
        if (nearest_sq(significant, u, v, 2) <= kCoverRadius * kCoverRadius) ++m.covered_truth;
      }
      if (significant(u, v)) {
        ++m.significant;
        const double d2 = nearest_sq(truth, u, v, reach);
        if (d2 > kMatchRadius * kMatchRadius) {
          ++m.far_detections;
        } else {
          ++m.matched;
          loc_sum += std::sqrt(d2);
        }
      }
    }
  }
  m.coverage = m.truth_pixels ? static_cast<double>(m.covered_truth) / m.truth_pixels : 0.0;
  m.mean_localization = m.matched ? loc_sum / m.matched : 0.0;
  return m;
}

EdgeMap detect_edges(const Image& img, const ContrastKernel& kernel,
                     std::span<const double> column_thresholds) {
  const ContrastField contrast = contrast_field(img, kernel);
  const ScalarField lap = laplacian_field(img, kernel.laplacian_radius());
  const Mask crossings = zero_crossings(lap);
  return significant_edges(crossings, contrast.c, column_thresholds, contrast.margin);
}

double white_threshold(const ContrastKernel& kernel, double sigma, double epsilon) {
  if (kernel.kind() == ContrastKind::c1) {
    return threshold_white(epsilon, sigma, kernel.inner_radius());
  }
  // White noise is stationary: one column of an identity covariance wide
  // enough for the kernel gives the law everywhere.
  const int n = kernel.half() + 1;
  const ColumnCovariance cov = column_covariance(Eigen::MatrixXd::Identity(n, n), sigma);
  const ContrastLaw law = contrast_law(cov, kernel, n);
  return solve_threshold(epsilon, law.sigma_y2, conditional_variance(law), TailMode::exact_tail);
}

ExperimentBundle run_white_experiment(const ExperimentConfig& raw) {
  if (raw.pipeline != Pipeline::white) throw ConfigError("pipeline", "expected 'white'");
  const ExperimentConfig cfg = resolve(raw);
  ExperimentBundle b;
  b.config = cfg;
  b.phantom = render(cfg.phantom);
  const Image noise = sample_field({cfg.sigma, cfg.seed, cfg.phantom.rows, cfg.phantom.cols});
  b.observed = add(b.phantom, noise);
  const Mask truth = ground_truth_edges(cfg.phantom);
  for (const auto& ks : cfg.kernels) {
    const ContrastKernel kernel = ks.make();
    Detection d;
    d.kernel = ks;
    d.thresholds.assign(static_cast<std::size_t>(b.observed.cols()),
                        white_threshold(kernel, cfg.sigma, cfg.epsilon));
    d.edges = detect_edges(b.observed, kernel, d.thresholds);
    d.metrics = evaluate_edges(d.edges.significant, truth, 2 * kernel.laplacian_radius());
    b.detections.push_back(std::move(d));
  }
  return b;
}

ExperimentBundle run_tomo_experiment(const ExperimentConfig& raw) {
  if (raw.pipeline != Pipeline::tomo) throw ConfigError("pipeline", "expected 'tomo'");
  const ExperimentConfig cfg = resolve(raw);
  const AbelOperator op = build_operator(cfg.phantom.cols / 2, cfg.pixel_pitch);
  ExperimentBundle b;
  b.config = cfg;
  b.phantom = render(cfg.phantom);
  b.radiograph = radiograph(b.phantom, op);
  const Image noise = sample_field({cfg.sigma, cfg.seed, cfg.phantom.rows, cfg.phantom.cols});
  b.noisy_radiograph = add(b.radiograph, noise);
  b.observed = reconstruct(b.noisy_radiograph, op);

  const ColumnCovariance cov = column_covariance(op, cfg.sigma);
  const Mask truth = ground_truth_edges(cfg.phantom);
  for (const auto& ks : cfg.kernels) {
    const ContrastKernel kernel = ks.make();
    b.profiles.push_back(threshold_profile(cov, kernel, cfg.epsilon, cfg.mode));
    Detection d;
    d.kernel = ks;
    d.thresholds = b.profiles.back().thresholds;
    d.edges = detect_edges(b.observed, kernel, d.thresholds);
    d.metrics = evaluate_edges(d.edges.significant, truth, 2 * kernel.laplacian_radius());
    b.detections.push_back(std::move(d));
  }
  return b;
}

ExperimentBundle run_experiment(const ExperimentConfig& cfg) {
  return cfg.pipeline == Pipeline::white ? run_white_experiment(cfg) : run_tomo_experiment(cfg);
}

ThresholdProfile compute_thresholds(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = resolve(raw);
  const ContrastKernel kernel = cfg.kernels.front().make();
  if (cfg.phantom.cols % 2 != 0) throw ConfigError("cols", "must be even");
  const int n = cfg.phantom.cols / 2;
  if (cfg.pipeline == Pipeline::white) {
    const ColumnCovariance cov = column_covariance(Eigen::MatrixXd::Identity(n, n), cfg.sigma);
    return threshold_profile(cov, kernel, cfg.epsilon, cfg.mode);
  }
  const AbelOperator op = build_operator(n, cfg.pixel_pitch);
  return threshold_profile(column_covariance(op, cfg.sigma), kernel, cfg.epsilon, cfg.mode);
}

std::string manifest_json(const ExperimentBundle& b) {
  const ExperimentConfig& cfg = b.config;
  nlohmann::json j;
  j["version"] = kVersion;
  j["preset"] = cfg.preset;
  j["pipeline"] = pipeline_name(cfg.pipeline);
  j["sigma"] = cfg.sigma;
  j["epsilon"] = cfg.epsilon;
  j["seed"] = cfg.seed;
  j["tail_mode"] = to_string(cfg.mode);
  if (cfg.pipeline == Pipeline::tomo) j["pixel_pitch"] = cfg.pixel_pitch;
  j["phantom_path"] = cfg.phantom_path;
  j["phantom_config"] = format_phantom_config(cfg.phantom);
  j["rng"] = "mt19937_64, 53-bit uniforms, Marsaglia polar normals, row-major fill";
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& d : b.detections) {
    runs.push_back({{"kernel", d.kernel.make().describe()},
                    {"tag", d.kernel.tag()},
                    {"contrast_overlay_scaling",
                     {{"method", "linear min-max over crossing pixels to 1..255"},
                      {"min", d.overlay_lo},
                      {"max", d.overlay_hi}}},
                    {"metrics", metrics_json(d.metrics)}});
  }
  j["detections"] = runs;
  return j.dump(2) + "\n";
}

void write_bundle(const ExperimentBundle& b, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };

  ExperimentBundle out = b;
  io::write_text_atomic(path("phantom.cfg"), format_phantom_config(b.config.phantom));
  io::write_f64(path("phantom.f64"), b.phantom);
  if (b.config.pipeline == Pipeline::tomo) {
    io::write_f64(path("radiograph.f64"), b.radiograph);
    io::write_f64(path("noisy_radiograph.f64"), b.noisy_radiograph);
    io::write_f64(path("reconstruction.f64"), b.observed);
    io::write_pgm(path("reconstruction.pgm"), io::to_grey(b.observed));
  } else {
    io::write_f64(path("noisy.f64"), b.observed);
    io::write_pgm(path("noisy.pgm"), io::to_grey(b.observed));
  }
  for (std::size_t k = 0; k < out.detections.size(); ++k) {
    auto& d = out.detections[k];
    const std::string tag = d.kernel.tag();
    io::write_pgm(path("contrast_" + tag + ".pgm"),
                  contrast_overlay(d.edges, &d.overlay_lo, &d.overlay_hi));
    io::write_mask_pgm(path("significant_" + tag + ".pgm"), d.edges.significant);
    if (k < b.profiles.size()) {
      std::ostringstream csv;
      write_profile_csv(csv, b.profiles[k]);
      io::write_text_atomic(path("thresholds_" + tag + ".csv"), csv.str());
    }
  }
  io::write_text_atomic(path("manifest.json"), manifest_json(out));
}

}  // namespace sigedge
