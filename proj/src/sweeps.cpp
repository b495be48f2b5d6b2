#include "fpacs/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fpacs/forward_model.hpp"
#include "fpacs/metrics.hpp"
#include "fpacs/rates.hpp"
#include "fpacs/rng.hpp"
#include "fpacs/scenes.hpp"

namespace fpacs {

namespace {

PatternSequence make_patterns(const GeometryConfig& geometry, PatternKind kind,
                              int t_count, std::uint64_t seed) {
  switch (kind) {
    case PatternKind::RandomBinary:
      return random_binary_sequence(geometry, t_count, 0.5, seed);
    case PatternKind::Hadamard:
      return hadamard_sequence(geometry, t_count);
    case PatternKind::PixelScan: {
      PatternSequence scan =
          pixel_scan_sequence(geometry, geometry.sensor_rows, geometry.sensor_cols);
      if (t_count > scan.count())
        throw ConfigError("pixel-scan sweep cannot exceed the scan length");
      scan.patterns.resize(static_cast<std::size_t>(t_count));
      return scan;
    }
  }
  throw ConfigError("unknown pattern kind");
}

// capture + solve one pipeline point; root_seed feeds pattern and noise
// sub-streams
ReconResult run_point(const HiResFrame& scene, const GeometryConfig& geometry,
                      const SparseMap& map, PatternKind kind, int t_count,
                      std::optional<double> snr_db, std::uint64_t root_seed,
                      const SolverConfig& solver_cfg) {
  PatternSequence patterns =
      make_patterns(geometry, kind, t_count, derive_seed(root_seed, 1));
  NoiseSpec noise = snr_db ? NoiseSpec::at_snr(*snr_db, derive_seed(root_seed, 2))
                           : NoiseSpec::none();
  std::vector<SensorFrame> captures =
      simulate_capture(map, geometry, patterns, scene, noise);
  StackedSystem system =
      stack(geometry, map, std::move(patterns), std::move(captures), 1);
  return solve(system, TvKind::TV2D, solver_cfg);
}

std::string summarize(const GeometryConfig& g, const OpticsConfig& o, PatternKind kind,
                      const SolverConfig& s) {
  std::ostringstream os;
  os << "dmd=" << g.dmd_rows << 'x' << g.dmd_cols << " sensor=" << g.sensor_rows << 'x'
     << g.sensor_cols << " patterns=" << pattern_kind_name(kind)
     << " blur=" << o.objective_blur_sigma << '/' << o.relay_blur_sigma
     << " shift=" << o.shift_rows << '/' << o.shift_cols << " lambda=" << s.lambda
     << " iters=" << s.max_iters;
  return os.str();
}

}  // namespace

SweepResult compression_sweep(const HiResFrame& scene, const GeometryConfig& geometry,
                              const OpticsConfig& optics, PatternKind kind,
                              const std::vector<int>& t_list, const NoiseSpec& noise,
                              const SolverConfig& solver_cfg) {
  if (t_list.empty()) throw ConfigError("compression sweep needs at least one T");
  noise.validate();
  const SparseMap map = build_map(geometry, optics);

  SweepResult result;
  result.axis_name = "T";
  result.config_summary = summarize(geometry, optics, kind, solver_cfg);
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    ReconResult recon =
        run_point(scene, geometry, map, kind, t_list[i], noise.snr_db,
                  derive_seed(noise.seed, static_cast<std::uint64_t>(i)), solver_cfg);
    const HiResFrame& est = recon.estimate.frames.front();
    result.axis.push_back(static_cast<double>(t_list[i]));
    result.psnr_db.push_back(psnr(est, scene));
    result.ssim_values.push_back(ssim(est, scene));
  }
  return result;
}

SweepResult noise_sweep(const HiResFrame& scene, const GeometryConfig& geometry,
                        const OpticsConfig& optics, PatternKind kind,
                        const std::vector<std::optional<double>>& snr_list,
                        int t_count, std::uint64_t base_seed,
                        const SolverConfig& solver_cfg) {
  if (snr_list.empty()) throw ConfigError("noise sweep needs at least one SNR point");
  const SparseMap map = build_map(geometry, optics);

  SweepResult result;
  result.axis_name = "snr_db";
  result.config_summary = summarize(geometry, optics, kind, solver_cfg);
  for (std::size_t i = 0; i < snr_list.size(); ++i) {
    ReconResult recon =
        run_point(scene, geometry, map, kind, t_count, snr_list[i],
                  derive_seed(base_seed, static_cast<std::uint64_t>(i)), solver_cfg);
    const HiResFrame& est = recon.estimate.frames.front();
    result.axis.push_back(snr_list[i] ? *snr_list[i]
                                      : std::numeric_limits<double>::infinity());
    result.psnr_db.push_back(psnr(est, scene));
    result.ssim_values.push_back(ssim(est, scene));
  }
  return result;
}

namespace {

// Michelson contrast of per-column means over the central half of the
// frame in both axes. Returns numerator and denominator so callers can
// treat degenerate targets explicitly.
void central_contrast(const HiResFrame& f, double& num, double& den) {
  const int r0 = f.rows / 4;
  const int r1 = r0 + std::max(1, f.rows / 2);
  const int c0 = f.cols / 4;
  const int c1 = c0 + std::max(1, f.cols / 2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int c = c0; c < c1; ++c) {
    double mean = 0.0;
    for (int r = r0; r < r1; ++r) mean += f.at(r, c);
    mean /= (r1 - r0);
    lo = std::min(lo, mean);
    hi = std::max(hi, mean);
  }
  num = hi - lo;
  den = hi + lo;
}

}  // namespace

MtfCurve mtf_curve(const GeometryConfig& geometry, const OpticsConfig& optics,
                   PatternKind kind, int t_count,
                   const std::vector<double>& frequencies,
                   const SolverConfig& solver_cfg, std::uint64_t base_seed) {
  if (frequencies.empty()) throw ConfigError("mtf curve needs at least one frequency");
  const SparseMap map = build_map(geometry, optics);

  MtfCurve curve;
  curve.alpha = compression_factor(static_cast<std::uint64_t>(geometry.n_dmd_pixels()),
                                   t_count,
                                   static_cast<std::uint64_t>(geometry.n_sensor_pixels()));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    ChartParams params;
    params.frequency = frequencies[i];
    const HiResFrame target = make_chart(geometry, ChartKind::Bars, params);
    double ideal_num, ideal_den;
    central_contrast(target, ideal_num, ideal_den);
    if (!(ideal_den > 0.0) || !(ideal_num > 0.0))
      throw NumericalError("bar target has no contrast in the readout region");

    ReconResult recon =
        run_point(target, geometry, map, kind, t_count, std::nullopt,
                  derive_seed(base_seed, static_cast<std::uint64_t>(i)), solver_cfg);
    double num, den;
    central_contrast(recon.estimate.frames.front(), num, den);
    double value = den > 0.0 ? (num / den) / (ideal_num / ideal_den) : 0.0;
    value = std::clamp(value, 0.0, 1.05);
    curve.frequencies.push_back(frequencies[i]);
    curve.mtf.push_back(value);
  }
  return curve;
}

void save_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.precision(17);
  os << result.axis_name << ",psnr_db,ssim\n";
  for (std::size_t i = 0; i < result.axis.size(); ++i) {
    if (std::isinf(result.axis[i]))
      os << "none";
    else
      os << result.axis[i];
    os << ',' << result.psnr_db[i] << ',' << result.ssim_values[i] << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

void save_mtf_csv(const MtfCurve& curve, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.precision(17);
  os << "frequency,mtf,alpha\n";
  for (std::size_t i = 0; i < curve.frequencies.size(); ++i)
    os << curve.frequencies[i] << ',' << curve.mtf[i] << ',' << curve.alpha << '\n';
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace fpacs
