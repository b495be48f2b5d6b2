#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpacs/frame.hpp"
#include "fpacs/pattern.hpp"
#include "fpacs/solver.hpp"
#include "fpacs/types.hpp"

namespace fpacs {

// One capture+reconstruct+score pipeline point per axis value. Points
// are seeded independently: point i uses derive_seed(base_seed, i) as
// its root (patterns and noise draw sub-seeds from that root).
struct SweepResult {
  std::string axis_name;      // "T" or "snr_db"
  std::vector<double> axis;   // +inf encodes a noiseless snr point
  std::vector<double> psnr_db;
  std::vector<double> ssim_values;
  std::string config_summary;
};

SweepResult compression_sweep(const HiResFrame& scene, const GeometryConfig& geometry,
                              const OpticsConfig& optics, PatternKind kind,
                              const std::vector<int>& t_list, const NoiseSpec& noise,
                              const SolverConfig& solver_cfg);

SweepResult noise_sweep(const HiResFrame& scene, const GeometryConfig& geometry,
                        const OpticsConfig& optics, PatternKind kind,
                        const std::vector<std::optional<double>>& snr_list,
                        int t_count, std::uint64_t base_seed,
                        const SolverConfig& solver_cfg);

struct MtfCurve {
  std::vector<double> frequencies;  // cycles per DMD pixel
  std::vector<double> mtf;          // clamped to [0, 1.05]
  double alpha = 0.0;
};

// Vertical square-wave bar target per frequency; contrast read as the
// Michelson ratio of per-column means over the central half of the
// reconstruction, normalized by the same readout on the ideal target.
MtfCurve mtf_curve(const GeometryConfig& geometry, const OpticsConfig& optics,
                   PatternKind kind, int t_count,
                   const std::vector<double>& frequencies,
                   const SolverConfig& solver_cfg, std::uint64_t base_seed);

void save_sweep_csv(const SweepResult& result, const std::string& path);
void save_mtf_csv(const MtfCurve& curve, const std::string& path);

}  // namespace fpacs
