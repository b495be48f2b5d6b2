#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpacs/calibration.hpp"
#include "fpacs/experiment.hpp"
#include "fpacs/forward_model.hpp"
#include "fpacs/metrics.hpp"
#include "fpacs/pattern.hpp"
#include "fpacs/raster_io.hpp"
#include "fpacs/rates.hpp"
#include "fpacs/scenes.hpp"
#include "fpacs/solver.hpp"
#include "fpacs/sparse_map.hpp"
#include "fpacs/sweeps.hpp"
#include "fpacs/types.hpp"

namespace fs = std::filesystem;

namespace {

// Options shared by the experiment subcommands; unset optionals leave
// the config file / defaults untouched.
struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;  // section.key=value overrides
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> t_count;
  std::optional<std::string> snr;  // number or "none"
  std::optional<double> lambda;
  std::optional<std::string> tv;
  std::optional<int> frames;
  std::optional<std::string> pattern_kind;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "experiment config file");
  sub->add_option("--set", o.sets, "override one config key (section.key=value)");
  sub->add_option("--out", o.out, "output directory (overrides [experiment] output_dir)");
  sub->add_option("--seed", o.seed, "base seed");
  sub->add_option("--T", o.t_count, "pattern count");
  sub->add_option("--snr", o.snr, "measurement SNR in dB, or 'none'");
  sub->add_option("--lambda", o.lambda, "TV weight");
  sub->add_option("--tv", o.tv, "TV kind: 2d or 3d");
  sub->add_option("--frames", o.frames, "reconstruction frame count");
  sub->add_option("--kind", o.pattern_kind, "pattern kind: random-binary, hadamard, pixel-scan");
}

fpacs::ExperimentConfig build_config(const CommonOpts& o) {
  fpacs::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = fpacs::load_config(o.config_path);
  for (const auto& s : o.sets) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      throw fpacs::ConfigError("--set expects section.key=value, got '" + s + "'");
    fpacs::set_config_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
                            s.substr(eq + 1));
  }
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.t_count) cfg.patterns.count = *o.t_count;
  if (o.snr) {
    if (*o.snr == "none") cfg.snr_db.reset();
    else cfg.snr_db = std::stod(*o.snr);
  }
  if (o.lambda) cfg.solver.lambda = *o.lambda;
  if (o.tv) cfg.tv = fpacs::tv_kind_from_name(*o.tv);
  if (o.frames) cfg.frame_count = *o.frames;
  if (o.pattern_kind) cfg.patterns.kind = fpacs::pattern_kind_from_name(*o.pattern_kind);
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

// Relative output directories land under $FPACS_OUTPUT_ROOT when set.
std::string resolve_output_dir(const std::string& dir) {
  if (dir.empty())
    throw fpacs::ConfigError("missing required key: [experiment] output_dir");
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("FPACS_OUTPUT_ROOT")) p = fs::path(root) / p;
  }
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw fpacs::IoError("cannot create output directory: " + p.string());
  return p.string();
}

std::string indexed_name(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem, index, ext);
  return buf;
}

void validate_experiment(const fpacs::ExperimentConfig& cfg) {
  cfg.geometry.validate();
  cfg.optics.validate(cfg.geometry);
  cfg.solver.validate();
  if (cfg.frame_count < 1) throw fpacs::ConfigError("frame_count must be >= 1");
}

fpacs::NoiseSpec noise_for(const fpacs::ExperimentConfig& cfg) {
  fpacs::NoiseSpec noise;
  noise.snr_db = cfg.snr_db;
  noise.seed = fpacs::noise_seed(cfg);
  noise.validate();
  return noise;
}

int cmd_simulate(const CommonOpts& opts) {
  fpacs::ExperimentConfig cfg = build_config(opts);
  validate_experiment(cfg);
  const std::string out = resolve_output_dir(cfg.output_dir);

  const fpacs::PatternSequence patterns = fpacs::make_pattern_sequence(cfg);
  const fpacs::SparseMap map = fpacs::build_map(cfg.geometry, cfg.optics);
  const fpacs::NoiseSpec noise = noise_for(cfg);
  cfg.patterns.count = patterns.count();  // manifest records the realized count

  std::vector<std::string> files;
  std::vector<fpacs::SensorFrame> captures;
  int scene_frames = 0;
  if (cfg.frame_count == 1) {
    const fpacs::HiResFrame scene = fpacs::make_scene_frame(cfg);
    captures = fpacs::simulate_capture(map, cfg.geometry, patterns, scene, noise);
    fpacs::save_frame_fpfr(scene, out + "/" + indexed_name("scene", 0, "fpfr"));
    files.push_back(indexed_name("scene", 0, "fpfr"));
    scene_frames = 1;
  } else {
    const fpacs::VideoCube scene = fpacs::make_scene_cube(cfg, patterns.count());
    captures = fpacs::simulate_capture(map, cfg.geometry, patterns, scene, noise);
    for (int f = 0; f < scene.frame_count(); ++f) {
      fpacs::save_frame_fpfr(scene.frames[static_cast<std::size_t>(f)],
                             out + "/" + indexed_name("scene", f, "fpfr"));
      files.push_back(indexed_name("scene", f, "fpfr"));
    }
    scene_frames = scene.frame_count();
  }

  fpacs::save_pattern_sequence(patterns, out + "/patterns.fpat");
  files.push_back("patterns.fpat");
  for (int t = 0; t < patterns.count(); ++t) {
    fpacs::save_pattern_pbm(patterns[t], out + "/" + indexed_name("pattern", t, "pbm"));
    files.push_back(indexed_name("pattern", t, "pbm"));
    fpacs::save_sensor_fpfr(captures[static_cast<std::size_t>(t)],
                            out + "/" + indexed_name("capture", t, "fpfr"));
    files.push_back(indexed_name("capture", t, "fpfr"));
  }

  fpacs::write_manifest(out, cfg, files);
  std::cout << "simulate: " << patterns.count() << " captures, " << scene_frames
            << " scene frame(s) -> " << out << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& capture_dir, const CommonOpts& opts,
                    const std::string& map_path) {
  // baseline config comes from the capture's manifest; flags override
  fpacs::ExperimentConfig cfg =
      opts.config_path.empty()
          ? fpacs::read_manifest_config(capture_dir + "/manifest.txt")
          : fpacs::load_config(opts.config_path);
  for (const auto& s : opts.sets) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      throw fpacs::ConfigError("--set expects section.key=value, got '" + s + "'");
    fpacs::set_config_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
                            s.substr(eq + 1));
  }
  if (opts.seed) cfg.base_seed = *opts.seed;
  if (opts.lambda) cfg.solver.lambda = *opts.lambda;
  if (opts.tv) cfg.tv = fpacs::tv_kind_from_name(*opts.tv);
  if (opts.frames) cfg.frame_count = *opts.frames;
  validate_experiment(cfg);

  if (cfg.tv == fpacs::TvKind::TV3D && cfg.frame_count < 2)
    throw fpacs::ConfigError("--tv 3d needs a multi-frame reconstruction (--frames >= 2)");

  const std::string out =
      resolve_output_dir(opts.out.empty() ? capture_dir + "/recon" : opts.out);

  fpacs::PatternSequence patterns =
      fpacs::load_pattern_sequence(capture_dir + "/patterns.fpat");
  std::vector<fpacs::SensorFrame> captures;
  captures.reserve(static_cast<std::size_t>(patterns.count()));
  for (int t = 0; t < patterns.count(); ++t) {
    fpacs::SensorFrame y =
        fpacs::load_sensor_fpfr(capture_dir + "/" + indexed_name("capture", t, "fpfr"));
    y.timestamp_index = t;
    captures.push_back(std::move(y));
  }
  fpacs::SparseMap map = map_path.empty()
                             ? fpacs::build_map(cfg.geometry, cfg.optics)
                             : fpacs::load_sparse_map(map_path);

  const fpacs::StackedSystem system =
      fpacs::stack(cfg.geometry, std::move(map), std::move(patterns),
                   std::move(captures), cfg.frame_count);
  const fpacs::ReconResult result = fpacs::solve(system, cfg.tv, cfg.solver);

  std::vector<std::string> files;
  for (int f = 0; f < result.estimate.frame_count(); ++f) {
    const auto& frame = result.estimate.frames[static_cast<std::size_t>(f)];
    fpacs::save_frame_fpfr(frame, out + "/" + indexed_name("estimate", f, "fpfr"));
    files.push_back(indexed_name("estimate", f, "fpfr"));
    fpacs::save_frame_pgm16(frame, out + "/" + indexed_name("estimate", f, "pgm"));
    files.push_back(indexed_name("estimate", f, "pgm"));
  }
  fpacs::save_trace_csv(result, out + "/objective.csv");
  files.push_back("objective.csv");

  const std::string scene_path = capture_dir + "/" + indexed_name("scene", 0, "fpfr");
  if (cfg.frame_count == 1 && fs::exists(scene_path)) {
    const fpacs::HiResFrame scene = fpacs::load_frame_fpfr(scene_path);
    const auto& est = result.estimate.frames.front();
    std::ofstream csv(out + "/metrics.csv");
    if (!csv) throw fpacs::IoError("cannot open for writing: " + out + "/metrics.csv");
    csv.precision(17);
    csv << "psnr_db,ssim\n" << fpacs::psnr(est, scene) << ',' << fpacs::ssim(est, scene)
        << '\n';
    files.push_back("metrics.csv");
  }

  fpacs::write_manifest(out, cfg, files);
  std::cout << "reconstruct: " << result.iterations_run << " iterations, objective "
            << (result.objective_trace.empty() ? 0.0 : result.objective_trace.back())
            << (result.converged ? " (converged)" : "") << " -> " << out << "\n";
  return 0;
}

int cmd_calibrate(const CommonOpts& opts, double tau) {
  fpacs::ExperimentConfig cfg = build_config(opts);
  validate_experiment(cfg);
  const std::string out = resolve_output_dir(cfg.output_dir);

  const int gr = cfg.patterns.groups_rows > 0 ? cfg.patterns.groups_rows
                                              : cfg.geometry.sensor_rows;
  const int gc = cfg.patterns.groups_cols > 0 ? cfg.patterns.groups_cols
                                              : cfg.geometry.sensor_cols;
  const fpacs::CalibrationRun run =
      fpacs::run_calibration(cfg.geometry, cfg.optics, gr, gc, noise_for(cfg));
  const fpacs::SparseMap truth = fpacs::build_map(cfg.geometry, cfg.optics);
  const fpacs::CalibrationEstimate est = fpacs::estimate_map(run, tau, &truth);
  const fpacs::CalibrationError err = fpacs::calibration_error(est.map_est, truth);

  fpacs::save_sparse_map(est.map_est, out + "/map_est.fpcs");
  {
    std::ofstream csv(out + "/calibration.csv");
    if (!csv)
      throw fpacs::IoError("cannot open for writing: " + out + "/calibration.csv");
    csv.precision(17);
    csv << "support_precision,support_recall,frobenius_rel_error,nnz_est,nnz_true\n"
        << err.support_precision << ',' << err.support_recall << ','
        << err.frobenius_rel_error << ',' << est.map_est.nnz() << ',' << truth.nnz()
        << '\n';
  }
  fpacs::write_manifest(out, cfg, {"map_est.fpcs", "calibration.csv"});
  std::cout << "calibrate: precision " << err.support_precision << ", recall "
            << err.support_recall << ", weight error " << err.frobenius_rel_error
            << " -> " << out << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis,
              const std::vector<int>& t_list, const std::vector<std::string>& snr_list) {
  fpacs::ExperimentConfig cfg = build_config(opts);
  validate_experiment(cfg);
  const std::string out = resolve_output_dir(cfg.output_dir);
  const fpacs::HiResFrame scene = fpacs::make_scene_frame(cfg);

  fpacs::SweepResult result;
  if (axis == "compression") {
    if (t_list.empty()) throw fpacs::ConfigError("--T list required for a compression sweep");
    fpacs::NoiseSpec noise;
    noise.snr_db = cfg.snr_db;
    noise.seed = cfg.base_seed;  // per-point sub-seeds derive from this
    result = fpacs::compression_sweep(scene, cfg.geometry, cfg.optics,
                                      cfg.patterns.kind, t_list, noise, cfg.solver);
  } else if (axis == "noise") {
    if (snr_list.empty()) throw fpacs::ConfigError("--snr-list required for a noise sweep");
    std::vector<std::optional<double>> snrs;
    for (const auto& s : snr_list) {
      if (s == "none") snrs.emplace_back(std::nullopt);
      else snrs.emplace_back(std::stod(s));
    }
    result = fpacs::noise_sweep(scene, cfg.geometry, cfg.optics, cfg.patterns.kind,
                                snrs, cfg.patterns.count, cfg.base_seed, cfg.solver);
  } else {
    throw fpacs::ConfigError("unknown sweep axis: " + axis);
  }

  fpacs::save_sweep_csv(result, out + "/sweep.csv");
  fpacs::write_manifest(out, cfg, {"sweep.csv"});
  std::cout << "sweep over " << result.axis_name << ":\n";
  for (std::size_t i = 0; i < result.axis.size(); ++i)
    std::cout << "  " << result.axis_name << "=" << result.axis[i] << "  psnr "
              << result.psnr_db[i] << " dB  ssim " << result.ssim_values[i] << "\n";
  std::cout << "-> " << out << "\n";
  return 0;
}

int cmd_mtf(const CommonOpts& opts, const std::vector<int>& t_list,
            const std::vector<double>& frequencies) {
  fpacs::ExperimentConfig cfg = build_config(opts);
  validate_experiment(cfg);
  if (t_list.empty()) throw fpacs::ConfigError("--T list required");
  if (frequencies.empty()) throw fpacs::ConfigError("--frequencies list required");
  const std::string out = resolve_output_dir(cfg.output_dir);

  std::vector<std::string> files;
  for (int t_count : t_list) {
    const fpacs::MtfCurve curve =
        fpacs::mtf_curve(cfg.geometry, cfg.optics, cfg.patterns.kind, t_count,
                         frequencies, cfg.solver, cfg.base_seed);
    const std::string name = "mtf_T" + std::to_string(t_count) + ".csv";
    fpacs::save_mtf_csv(curve, out + "/" + name);
    files.push_back(name);
    std::cout << "T=" << t_count << " (alpha " << curve.alpha << "):";
    for (std::size_t i = 0; i < curve.frequencies.size(); ++i)
      std::cout << "  " << curve.frequencies[i] << "->" << curve.mtf[i];
    std::cout << "\n";
  }
  fpacs::write_manifest(out, cfg, files);
  std::cout << "-> " << out << "\n";
  return 0;
}

std::string format_count(double v) {
  if (std::abs(v - std::llround(v)) < 1e-9 && std::abs(v) < 9e15)
    return std::to_string(std::llround(v));
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int cmd_rates(int sensor_side, double f_dmd, double alpha,
              const std::vector<double>& megapixels) {
  const fpacs::RateReport report =
      megapixels.empty() ? fpacs::rate_report(sensor_side, f_dmd, alpha)
                         : fpacs::rate_report(sensor_side, f_dmd, alpha, megapixels);
  char approx[40];
  std::cout << "measurement rate M_r = " << format_count(report.measurement_rate)
            << " samples/s";
  std::snprintf(approx, sizeof(approx), " (~%.1e)", report.measurement_rate);
  std::cout << approx << "\n";
  std::cout << "expansion alpha = " << format_count(report.alpha) << "\n";
  std::cout << "throughput STR = " << format_count(report.str) << " pixels/s";
  std::snprintf(approx, sizeof(approx), " (~%.1e)", report.str);
  std::cout << approx << "\n";
  std::cout << "achievable frame rates:\n";
  for (const auto& [mp, fps] : report.achievable) {
    std::snprintf(approx, sizeof(approx), "  %.2f MP: %.2f fps", mp, fps);
    std::cout << approx << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"focal-plane-array compressive imaging toolkit"};
  app.require_subcommand(1);

  CommonOpts sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "generate a coded capture directory");
  add_common(sim, sim_opts);

  CommonOpts rec_opts;
  std::string capture_dir, map_path;
  CLI::App* rec = app.add_subcommand("reconstruct", "solve a capture directory");
  rec->add_option("capture_dir", capture_dir, "directory written by simulate")->required();
  rec->add_option("--map", map_path, "response map file (default: rebuild from config)");
  add_common(rec, rec_opts);

  CommonOpts cal_opts;
  double tau = 0.01;
  CLI::App* cal = app.add_subcommand("calibrate", "impulse-scan calibration round trip");
  cal->add_option("--tau", tau, "support threshold fraction");
  add_common(cal, cal_opts);

  CommonOpts sweep_opts;
  std::string axis = "compression";
  std::vector<int> sweep_t;
  std::vector<std::string> sweep_snr;
  CLI::App* swp = app.add_subcommand("sweep", "compression or noise sweep");
  swp->add_option("--axis", axis, "compression or noise");
  swp->add_option("--T-list", sweep_t, "pattern counts")->delimiter(',');
  swp->add_option("--snr-list", sweep_snr, "SNR values in dB, 'none' for noiseless")
      ->delimiter(',');
  add_common(swp, sweep_opts);

  CommonOpts mtf_opts;
  std::vector<int> mtf_t;
  std::vector<double> mtf_freqs{0.02, 0.04, 0.08, 0.16, 0.32};
  CLI::App* mtf = app.add_subcommand("mtf", "modulation transfer curves, one CSV per T");
  mtf->add_option("--T-list", mtf_t, "pattern counts")->delimiter(',');
  mtf->add_option("--frequencies", mtf_freqs, "bar frequencies, cycles/pixel")
      ->delimiter(',');
  add_common(mtf, mtf_opts);

  int rates_k = 64;
  double rates_fdmd = 480.0, rates_alpha = 16.0;
  std::vector<double> rates_mp;
  CLI::App* rts = app.add_subcommand("rates", "throughput arithmetic");
  rts->add_option("--K", rates_k, "sensor side length");
  rts->add_option("--fdmd", rates_fdmd, "DMD pattern rate [Hz]");
  rts->add_option("--alpha", rates_alpha, "expansion factor");
  rts->add_option("--mp", rates_mp, "frame sizes in megapixels")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (rec->parsed()) return cmd_reconstruct(capture_dir, rec_opts, map_path);
    if (cal->parsed()) return cmd_calibrate(cal_opts, tau);
    if (swp->parsed()) return cmd_sweep(sweep_opts, axis, sweep_t, sweep_snr);
    if (mtf->parsed()) return cmd_mtf(mtf_opts, mtf_t, mtf_freqs);
    if (rts->parsed()) return cmd_rates(rates_k, rates_fdmd, rates_alpha, rates_mp);
  } catch (const fpacs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fpacs::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const fpacs::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
