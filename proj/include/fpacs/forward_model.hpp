#pragma once

#include <vector>

#include "fpacs/frame.hpp"
#include "fpacs/pattern.hpp"
#include "fpacs/sparse_map.hpp"
#include "fpacs/types.hpp"

namespace fpacs {

// Builds the sensor-to-DMD response map C. Each sensor pixel averages its
// (possibly shifted) block of DMD mirrors after the objective and relay
// blurs; blur kernels are Gaussians truncated at +-3 sigma, renormalized
// to unit sum, and applied as mass-preserving scatters (a mirror's light
// is redistributed over in-bounds DMD positions), so with an unshifted
// grid every column of C sums to exactly 1/(block_rows*block_cols).
SparseMap build_map(const GeometryConfig& geometry, const OpticsConfig& optics);

// y = C (pattern .* x), exact.
SensorFrame forward(const SparseMap& map, const GeometryConfig& geometry,
                    const DmdPattern& pattern, const HiResFrame& x);

// (C D)^T y = D C^T y.
HiResFrame adjoint(const SparseMap& map, const GeometryConfig& geometry,
                   const DmdPattern& pattern, const SensorFrame& y);

// Captures one measurement per pattern. A single frame is held static; a
// video cube must have one scene frame per pattern. When noise carries an
// SNR, i.i.d. zero-mean Gaussian noise is added with sigma derived once
// from the rms of the whole clean capture: sigma = rms / 10^(snr_db/20).
std::vector<SensorFrame> simulate_capture(const SparseMap& map,
                                          const GeometryConfig& geometry,
                                          const PatternSequence& patterns,
                                          const HiResFrame& scene,
                                          const NoiseSpec& noise);
std::vector<SensorFrame> simulate_capture(const SparseMap& map,
                                          const GeometryConfig& geometry,
                                          const PatternSequence& patterns,
                                          const VideoCube& scene,
                                          const NoiseSpec& noise);

// T measurement/pattern pairs grouped under frame_count unknown frames;
// measurements [g*T/frame_count, (g+1)*T/frame_count) observe frame g.
// frame_count = 1 is the single-image mode.
struct StackedSystem {
  GeometryConfig geometry;
  SparseMap map;
  PatternSequence patterns;
  std::vector<SensorFrame> measurements;
  int frame_count = 1;

  int measurement_count() const { return static_cast<int>(measurements.size()); }
  int measurements_per_frame() const { return measurement_count() / frame_count; }
  std::size_t total_rows() const {
    return static_cast<std::size_t>(measurement_count()) * geometry.n_sensor_pixels();
  }
  std::size_t total_cols() const {
    return static_cast<std::size_t>(frame_count) * geometry.n_dmd_pixels();
  }
  // Recovered pixels per measured sample, alpha = N / (T_per_frame * K^2).
  double compression_factor() const {
    return static_cast<double>(total_cols()) / static_cast<double>(total_rows());
  }

  void validate() const;
};

StackedSystem stack(const GeometryConfig& geometry, SparseMap map,
                    PatternSequence patterns, std::vector<SensorFrame> measurements,
                    int frame_count = 1);

// Stacked operator applied to a cube of frame_count frames; output is the
// flat concatenation of all sensor frames in measurement order.
std::vector<double> apply_stacked(const StackedSystem& system, const VideoCube& x);
// Its adjoint, from a flat measurement vector back to a cube.
VideoCube apply_stacked_adjoint(const StackedSystem& system,
                                const std::vector<double>& r);
// Flat view of the measurements (same ordering as apply_stacked output).
std::vector<double> flatten_measurements(const StackedSystem& system);

}  // namespace fpacs
