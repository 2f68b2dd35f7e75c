// Command-line front end for the significant-edge pipeline.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical degeneracy,
// 1 any other failure (I/O).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigedge/abel.hpp"
#include "sigedge/experiment.hpp"
#include "sigedge/image_io.hpp"
#include "sigedge/noise_white.hpp"
#include "sigedge/phantom.hpp"

namespace {

using namespace sigedge;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

struct PipelineOptions {
  std::string pipeline = "white";
  double sigma = 0.2;
  double epsilon = 1e-5;
  std::vector<std::string> kernels{"c1:12"};
  double pitch = 0.5;
  std::string mode = "exact_tail";
  std::string phantom;
};

void add_pipeline_options(CLI::App* cmd, PipelineOptions& o) {
  cmd->add_option("--pipeline", o.pipeline, "white or tomo")
      ->check(CLI::IsMember({"white", "tomo"}))
      ->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "noise std (image for white, radiograph for tomo)")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "significance level")->capture_default_str();
  cmd->add_option("--kernel", o.kernels, "contrast kernel(s): c1:<r> or c2:<r1>,<r2>")
      ->capture_default_str();
  cmd->add_option("--pitch", o.pitch, "radiograph pixel pitch (tomo)")->capture_default_str();
  cmd->add_option("--mode", o.mode, "threshold mode: exact_tail or paper_gamma")
      ->check(CLI::IsMember({"exact_tail", "paper_gamma"}))
      ->capture_default_str();
}

ExperimentConfig to_config(const PipelineOptions& o) {
  ExperimentConfig cfg;
  cfg.pipeline = o.pipeline == "tomo" ? Pipeline::tomo : Pipeline::white;
  cfg.sigma = o.sigma;
  cfg.epsilon = o.epsilon;
  cfg.kernels.clear();
  for (const auto& k : o.kernels) cfg.kernels.push_back(KernelSpec::parse(k));
  cfg.pixel_pitch = o.pitch;
  cfg.mode = tail_mode_from_string(o.mode);
  cfg.phantom_path = o.phantom;
  return cfg;
}

std::string with_ext(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

int run(int argc, char** argv) {
  CLI::App app{"Significant edges under stationary and tomographic Gaussian noise"};
  app.require_subcommand(1);

  // phantom
  std::string ph_config, ph_out, ph_truth;
  bool ph_sloped = false, ph_print = false;
  auto* ph = app.add_subcommand("phantom", "render the synthetic phantom");
  ph->add_option("--config", ph_config, "phantom key-value config (default geometry if omitted)");
  ph->add_flag("--sloped", ph_sloped, "use the inhomogeneous (sloped) default");
  ph->add_option("--out", ph_out, "output grid (.f64); a .pgm preview is written alongside");
  ph->add_option("--truth", ph_truth, "ground-truth edge mask (.pgm)");
  ph->add_flag("--print-config", ph_print, "print the resolved config to stdout");

  // operator
  int op_n = 256;
  double op_pitch = 1.0;
  std::string op_h, op_m, op_amp;
  auto* opc = app.add_subcommand("operator", "export the Abel projection matrix and its inverse");
  opc->add_option("--n", op_n, "half width")->capture_default_str();
  opc->add_option("--pitch", op_pitch, "pixel pitch")->capture_default_str();
  opc->add_option("--out-h", op_h, "CSV for H");
  opc->add_option("--out-m", op_m, "CSV for M = H^-1");
  opc->add_option("--out-amplification", op_amp, "CSV of ||row j of M||_2");

  // radiograph
  std::string rg_in, rg_out;
  double rg_pitch = 0.5, rg_noise = 0.0;
  std::uint64_t rg_seed = 1;
  auto* rg = app.add_subcommand("radiograph", "forward-project a slice, optionally adding noise");
  rg->add_option("--in", rg_in, "slice (.f64 or .pgm)")->required();
  rg->add_option("--out", rg_out, "radiograph (.f64)")->required();
  rg->add_option("--pitch", rg_pitch, "pixel pitch")->capture_default_str();
  rg->add_option("--noise-sigma", rg_noise, "add white Gaussian noise of this std")
      ->capture_default_str();
  rg->add_option("--seed", rg_seed, "random seed")->capture_default_str();

  // reconstruct
  std::string rc_in, rc_out;
  double rc_pitch = 0.5;
  auto* rc = app.add_subcommand("reconstruct", "invert a radiograph row by row");
  rc->add_option("--in", rc_in, "radiograph (.f64)")->required();
  rc->add_option("--out", rc_out, "reconstruction (.f64); a .pgm preview is written alongside")
      ->required();
  rc->add_option("--pitch", rc_pitch, "pixel pitch")->capture_default_str();

  // thresholds
  PipelineOptions th_opts;
  int th_width = 512;
  std::string th_out;
  auto* th = app.add_subcommand("thresholds", "per-column significance thresholds as CSV");
  add_pipeline_options(th, th_opts);
  th->add_option("--width", th_width, "full image width (even)")->capture_default_str();
  th->add_option("--out", th_out, "CSV path (stdout if omitted)");

  // detect
  PipelineOptions dt_opts;
  std::string dt_in, dt_dir;
  auto* dt = app.add_subcommand("detect", "significant edges of an image");
  add_pipeline_options(dt, dt_opts);
  dt->add_option("--in", dt_in, "image (.f64 or .pgm)")->required();
  dt->add_option("--out-dir", dt_dir, "output directory")->required();

  // experiment
  std::string ex_preset, ex_dir, ex_phantom;
  std::uint64_t ex_seed = 1;
  std::optional<double> ex_sigma, ex_epsilon;
  std::string ex_mode;
  auto* ex = app.add_subcommand("experiment", "reproduce a named experiment");
  ex->add_option("--preset", ex_preset, "fig5, fig6, fig7, fig9 or fig10-12")->required();
  ex->add_option("--seed", ex_seed, "random seed")->capture_default_str();
  ex->add_option("--out-dir", ex_dir, "output directory")->required();
  ex->add_option("--sigma", ex_sigma, "override the preset noise level");
  ex->add_option("--epsilon", ex_epsilon, "override the preset significance level");
  ex->add_option("--phantom", ex_phantom, "override the phantom config file");
  ex->add_option("--mode", ex_mode, "threshold mode")
      ->check(CLI::IsMember({"exact_tail", "paper_gamma"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*ph) {
      PhantomSpec spec = ph_sloped ? sloped_phantom() : default_phantom();
      if (!ph_config.empty()) spec = load_phantom_config(ph_config);
      if (ph_print) std::cout << format_phantom_config(spec);
      if (!ph_out.empty()) {
        const Image img = render(spec);
        io::write_f64(ph_out, img);
        io::write_pgm(with_ext(ph_out, ".pgm"), io::to_grey(img));
      }
      if (!ph_truth.empty()) io::write_mask_pgm(ph_truth, ground_truth_edges(spec));
    } else if (*opc) {
      const AbelOperator op = build_operator(op_n, op_pitch);
      const auto dump = [](const std::string& path, const Eigen::MatrixXd& m) {
        std::ostringstream os;
        write_matrix_csv(os, m);
        io::write_text_atomic(path, os.str());
      };
      if (!op_h.empty()) dump(op_h, op.projection());
      if (!op_m.empty()) dump(op_m, op.inverse());
      if (!op_amp.empty()) {
        const auto amp = op.noise_amplification();
        dump(op_amp, Eigen::Map<const Eigen::MatrixXd>(amp.data(), 1, static_cast<Eigen::Index>(amp.size())));
      }
    } else if (*rg) {
      const Image slice = io::read_image(rg_in);
      if (slice.cols() % 2 != 0) throw ConfigError("in", "slice width must be even");
      const AbelOperator op = build_operator(slice.cols() / 2, rg_pitch);
      Image g = radiograph(slice, op);
      if (rg_noise > 0.0) {
        const Image noise = sample_field({rg_noise, rg_seed, g.rows(), g.cols()});
        for (std::size_t k = 0; k < g.size(); ++k) g.data()[k] += noise.data()[k];
      }
      io::write_f64(rg_out, g);
    } else if (*rc) {
      const Image g = io::read_image(rc_in);
      if (g.cols() % 2 != 0) throw ConfigError("in", "radiograph width must be even");
      const AbelOperator op = build_operator(g.cols() / 2, rc_pitch);
      const Image f = reconstruct(g, op);
      io::write_f64(rc_out, f);
      io::write_pgm(with_ext(rc_out, ".pgm"), io::to_grey(f));
    } else if (*th) {
      ExperimentConfig cfg = to_config(th_opts);
      cfg.phantom.cols = th_width;
      const ThresholdProfile p = compute_thresholds(cfg);
      std::ostringstream os;
      write_profile_csv(os, p);
      if (th_out.empty()) {
        std::cout << os.str();
      } else {
        io::write_text_atomic(th_out, os.str());
      }
    } else if (*dt) {
      ExperimentConfig cfg = to_config(dt_opts);
      const Image img = io::read_image(dt_in);
      cfg.phantom.rows = img.rows();
      cfg.phantom.cols = img.cols();
      cfg.phantom.body = cfg.phantom.circle = cfg.phantom.inner = Ellipse{};
      cfg = resolve(cfg);
      std::filesystem::create_directories(dt_dir);
      const auto out = [&](const std::string& n) { return (std::filesystem::path(dt_dir) / n).string(); };
      ThresholdProfile profile;
      bool have_profile = false;
      for (const auto& ks : cfg.kernels) {
        const ContrastKernel kernel = ks.make();
        std::vector<double> thresholds;
        if (cfg.pipeline == Pipeline::white) {
          thresholds.assign(static_cast<std::size_t>(img.cols()),
                            white_threshold(kernel, cfg.sigma, cfg.epsilon));
        } else {
          if (img.cols() % 2 != 0) throw ConfigError("in", "tomographic image width must be even");
          ExperimentConfig tc = cfg;
          tc.kernels = {ks};
          profile = compute_thresholds(tc);
          have_profile = true;
          thresholds = profile.thresholds;
        }
        const EdgeMap edges = detect_edges(img, kernel, thresholds);
        io::write_pgm(out("contrast_" + ks.tag() + ".pgm"), contrast_overlay(edges));
        io::write_mask_pgm(out("significant_" + ks.tag() + ".pgm"), edges.significant);
        if (have_profile) {
          std::ostringstream csv;
          write_profile_csv(csv, profile);
          io::write_text_atomic(out("thresholds_" + ks.tag() + ".csv"), csv.str());
        }
        std::cout << kernel.describe() << ": " << count(edges.zero_crossing) << " crossings, "
                  << count(edges.significant) << " significant\n";
      }
    } else if (*ex) {
      ExperimentConfig cfg = preset(ex_preset);
      cfg.seed = ex_seed;
      if (ex_sigma) cfg.sigma = *ex_sigma;
      if (ex_epsilon) cfg.epsilon = *ex_epsilon;
      if (!ex_phantom.empty()) cfg.phantom_path = ex_phantom;
      if (!ex_mode.empty()) cfg.mode = tail_mode_from_string(ex_mode);
      const ExperimentBundle bundle = run_experiment(cfg);
      write_bundle(bundle, ex_dir);
      for (const auto& d : bundle.detections) {
        std::cout << d.kernel.make().describe() << ": significant=" << d.metrics.significant
                  << " coverage=" << d.metrics.coverage
                  << " far=" << d.metrics.far_detections
                  << " localization=" << d.metrics.mean_localization << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateLawError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
