#include "fpacs/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "fpacs/rng.hpp"

namespace fpacs {

namespace {

// Unit-sum Gaussian taps truncated at +-ceil(3 sigma); sigma = 0 is the
// identity.
std::vector<double> gaussian_taps(double sigma, int& radius) {
  if (sigma <= 0.0) {
    radius = 0;
    return {1.0};
  }
  radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    const double v = std::exp(-0.5 * (d / sigma) * (d / sigma));
    taps[d + radius] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

// One axis of the map, transposed: list[i] holds (dmd index, weight)
// pairs for sensor index i, ascending in dmd index. The two blurs are
// mass-preserving scatters (taps falling off the DMD are renormalized
// away per source position), then each DMD position lands in the block
// [i*block + shift, (i+1)*block + shift) with weight 1/block.
std::vector<std::vector<std::pair<int, double>>> axis_factor(
    int dmd_n, int sensor_n, int block, int shift, double sigma1, double sigma2) {
  int r1 = 0, r2 = 0;
  const std::vector<double> k1 = gaussian_taps(sigma1, r1);
  const std::vector<double> k2 = gaussian_taps(sigma2, r2);

  std::vector<std::vector<std::pair<int, double>>> rows(
      static_cast<std::size_t>(sensor_n));
  std::vector<double> acc(static_cast<std::size_t>(2 * (r1 + r2) + 1));
  std::vector<double> per_sensor(static_cast<std::size_t>(sensor_n));
  std::vector<int> touched;

  for (int j = 0; j < dmd_n; ++j) {
    // scatter of a unit at j through blur 1 then blur 2, on the window
    // [j - r1 - r2, j + r1 + r2]
    const int lo = j - r1 - r2;
    std::fill(acc.begin(), acc.end(), 0.0);
    double s1 = 0.0;
    for (int d = -r1; d <= r1; ++d) {
      const int u = j + d;
      if (u >= 0 && u < dmd_n) s1 += k1[d + r1];
    }
    for (int d = -r1; d <= r1; ++d) {
      const int u = j + d;
      if (u < 0 || u >= dmd_n) continue;
      const double w1 = k1[d + r1] / s1;
      double s2 = 0.0;
      for (int e = -r2; e <= r2; ++e) {
        const int v = u + e;
        if (v >= 0 && v < dmd_n) s2 += k2[e + r2];
      }
      for (int e = -r2; e <= r2; ++e) {
        const int v = u + e;
        if (v < 0 || v >= dmd_n) continue;
        acc[static_cast<std::size_t>(v - lo)] += w1 * k2[e + r2] / s2;
      }
    }
    // block integration
    touched.clear();
    for (int v = std::max(lo, 0); v <= std::min(j + r1 + r2, dmd_n - 1); ++v) {
      const double w = acc[static_cast<std::size_t>(v - lo)];
      if (w == 0.0) continue;
      const int rel = v - shift;
      if (rel < 0) continue;
      const int i = rel / block;
      if (i >= sensor_n) continue;
      if (per_sensor[static_cast<std::size_t>(i)] == 0.0) touched.push_back(i);
      per_sensor[static_cast<std::size_t>(i)] += w / block;
    }
    std::sort(touched.begin(), touched.end());
    for (int i : touched) {
      rows[static_cast<std::size_t>(i)].emplace_back(j, per_sensor[static_cast<std::size_t>(i)]);
      per_sensor[static_cast<std::size_t>(i)] = 0.0;
    }
  }
  return rows;
}

void check_map_geometry(const SparseMap& map, const GeometryConfig& geometry) {
  if (map.n_sensor_pixels != static_cast<std::uint64_t>(geometry.n_sensor_pixels()) ||
      map.n_dmd_pixels != static_cast<std::uint64_t>(geometry.n_dmd_pixels())) {
    throw ConfigError("sensor-to-DMD map does not match the geometry");
  }
}

void check_pattern_shape(const DmdPattern& pattern, const GeometryConfig& geometry) {
  if (pattern.rows != geometry.dmd_rows || pattern.cols != geometry.dmd_cols) {
    throw ConfigError("pattern shape does not match the DMD grid");
  }
}

void check_scene_shape(const HiResFrame& x, const GeometryConfig& geometry) {
  x.validate_shape();
  if (x.rows != geometry.dmd_rows || x.cols != geometry.dmd_cols) {
    throw ConfigError("scene shape does not match the DMD grid");
  }
}

}  // namespace

SparseMap build_map(const GeometryConfig& geometry, const OpticsConfig& optics) {
  geometry.validate();
  optics.validate(geometry);

  const auto row_factor =
      axis_factor(geometry.dmd_rows, geometry.sensor_rows, geometry.block_rows,
                  optics.shift_rows, optics.objective_blur_sigma, optics.relay_blur_sigma);
  const auto col_factor =
      axis_factor(geometry.dmd_cols, geometry.sensor_cols, geometry.block_cols,
                  optics.shift_cols, optics.objective_blur_sigma, optics.relay_blur_sigma);

  SparseMap map;
  map.n_sensor_pixels = static_cast<std::uint64_t>(geometry.n_sensor_pixels());
  map.n_dmd_pixels = static_cast<std::uint64_t>(geometry.n_dmd_pixels());

  std::size_t total = 0;
  for (const auto& r : row_factor)
    for (const auto& c : col_factor) total += r.size() * c.size();
  map.entries.reserve(total);

  // canonical order: sensor index i = i_r * sensor_cols + i_c ascending,
  // then dmd index j = j_r * dmd_cols + j_c ascending (both factor rows
  // are already sorted by dmd index)
  for (int i_r = 0; i_r < geometry.sensor_rows; ++i_r) {
    const auto& rr = row_factor[static_cast<std::size_t>(i_r)];
    for (int i_c = 0; i_c < geometry.sensor_cols; ++i_c) {
      const auto& cc = col_factor[static_cast<std::size_t>(i_c)];
      const std::uint64_t i =
          static_cast<std::uint64_t>(i_r) * geometry.sensor_cols + i_c;
      for (const auto& [j_r, w_r] : rr) {
        const std::uint64_t j_base = static_cast<std::uint64_t>(j_r) * geometry.dmd_cols;
        for (const auto& [j_c, w_c] : cc) {
          map.entries.push_back(MapEntry{i, j_base + j_c, w_r * w_c});
        }
      }
    }
  }
  return map;
}

SensorFrame forward(const SparseMap& map, const GeometryConfig& geometry,
                    const DmdPattern& pattern, const HiResFrame& x) {
  check_map_geometry(map, geometry);
  check_pattern_shape(pattern, geometry);
  check_scene_shape(x, geometry);

  SensorFrame y(geometry.sensor_rows, geometry.sensor_cols);
  for (const MapEntry& e : map.entries) {
    if (!pattern.data[e.dmd_index]) continue;
    y.data[e.sensor_index] += e.weight * x.data[e.dmd_index];
  }
  return y;
}

HiResFrame adjoint(const SparseMap& map, const GeometryConfig& geometry,
                   const DmdPattern& pattern, const SensorFrame& y) {
  check_map_geometry(map, geometry);
  check_pattern_shape(pattern, geometry);
  if (y.rows != geometry.sensor_rows || y.cols != geometry.sensor_cols) {
    throw ConfigError("measurement shape does not match the sensor grid");
  }

  HiResFrame x(geometry.dmd_rows, geometry.dmd_cols);
  for (const MapEntry& e : map.entries) {
    if (!pattern.data[e.dmd_index]) continue;
    x.data[e.dmd_index] += e.weight * y.data[e.sensor_index];
  }
  return x;
}

namespace {

std::vector<SensorFrame> capture_clean(const SparseMap& map,
                                       const GeometryConfig& geometry,
                                       const PatternSequence& patterns,
                                       const VideoCube& scene, bool static_scene) {
  std::vector<SensorFrame> out;
  out.reserve(static_cast<std::size_t>(patterns.count()));
  for (int t = 0; t < patterns.count(); ++t) {
    const HiResFrame& frame = static_scene ? scene.frames.front()
                                           : scene.frames[static_cast<std::size_t>(t)];
    SensorFrame y = forward(map, geometry, patterns[t], frame);
    y.timestamp_index = t;
    out.push_back(std::move(y));
  }
  return out;
}

// sigma from the rms of the whole clean capture, one draw stream over
// all samples in capture order
void add_noise(std::vector<SensorFrame>& capture, const NoiseSpec& noise) {
  noise.validate();
  if (!noise.snr_db) return;
  double sq = 0.0;
  std::size_t n = 0;
  for (const auto& y : capture) {
    sq += norm2(y.data);
    n += y.data.size();
  }
  if (n == 0 || sq == 0.0) {
    throw NumericalError("cannot set an SNR on a zero-energy capture");
  }
  const double rms = std::sqrt(sq / static_cast<double>(n));
  const double sigma = rms / std::pow(10.0, *noise.snr_db / 20.0);
  SeededRng rng(noise.seed);
  for (auto& y : capture) {
    for (double& v : y.data) v += sigma * rng.gaussian();
  }
}

}  // namespace

std::vector<SensorFrame> simulate_capture(const SparseMap& map,
                                          const GeometryConfig& geometry,
                                          const PatternSequence& patterns,
                                          const HiResFrame& scene,
                                          const NoiseSpec& noise) {
  VideoCube cube;
  cube.frames.push_back(scene);
  auto capture = capture_clean(map, geometry, patterns, cube, /*static_scene=*/true);
  add_noise(capture, noise);
  return capture;
}

std::vector<SensorFrame> simulate_capture(const SparseMap& map,
                                          const GeometryConfig& geometry,
                                          const PatternSequence& patterns,
                                          const VideoCube& scene,
                                          const NoiseSpec& noise) {
  scene.validate();
  if (scene.frame_count() != patterns.count()) {
    throw ConfigError("video capture needs one scene frame per pattern");
  }
  auto capture = capture_clean(map, geometry, patterns, scene, /*static_scene=*/false);
  add_noise(capture, noise);
  return capture;
}

void StackedSystem::validate() const {
  geometry.validate();
  if (map.n_sensor_pixels != static_cast<std::uint64_t>(geometry.n_sensor_pixels()) ||
      map.n_dmd_pixels != static_cast<std::uint64_t>(geometry.n_dmd_pixels())) {
    throw ConfigError("stacked system: map does not match the geometry");
  }
  if (patterns.count() == 0 ||
      patterns.count() != static_cast<int>(measurements.size())) {
    throw ConfigError("stacked system: need one pattern per measurement");
  }
  for (const auto& p : patterns.patterns) {
    if (p.rows != geometry.dmd_rows || p.cols != geometry.dmd_cols)
      throw ConfigError("stacked system: pattern shape mismatch");
  }
  for (const auto& y : measurements) {
    if (y.rows != geometry.sensor_rows || y.cols != geometry.sensor_cols)
      throw ConfigError("stacked system: measurement shape mismatch");
  }
  if (frame_count < 1 || measurement_count() % frame_count != 0) {
    throw ConfigError("stacked system: frame count must divide the measurement count");
  }
}

StackedSystem stack(const GeometryConfig& geometry, SparseMap map,
                    PatternSequence patterns, std::vector<SensorFrame> measurements,
                    int frame_count) {
  StackedSystem system{geometry, std::move(map), std::move(patterns),
                       std::move(measurements), frame_count};
  system.validate();
  return system;
}

std::vector<double> apply_stacked(const StackedSystem& system, const VideoCube& x) {
  if (x.frame_count() != system.frame_count) {
    throw ConfigError("stacked apply: cube frame count mismatch");
  }
  const std::size_t k2 = system.geometry.n_sensor_pixels();
  std::vector<double> out(system.total_rows());
  const int per_frame = system.measurements_per_frame();
  for (int t = 0; t < system.measurement_count(); ++t) {
    const int g = t / per_frame;
    SensorFrame y = forward(system.map, system.geometry, system.patterns[t],
                            x.frames[static_cast<std::size_t>(g)]);
    std::copy(y.data.begin(), y.data.end(),
              out.begin() + static_cast<std::ptrdiff_t>(t) * static_cast<std::ptrdiff_t>(k2));
  }
  return out;
}

VideoCube apply_stacked_adjoint(const StackedSystem& system,
                                const std::vector<double>& r) {
  if (r.size() != system.total_rows()) {
    throw ConfigError("stacked adjoint: residual length mismatch");
  }
  const std::size_t k2 = system.geometry.n_sensor_pixels();
  VideoCube x;
  x.frames.assign(static_cast<std::size_t>(system.frame_count),
                  HiResFrame(system.geometry.dmd_rows, system.geometry.dmd_cols));
  const int per_frame = system.measurements_per_frame();
  SensorFrame y(system.geometry.sensor_rows, system.geometry.sensor_cols);
  for (int t = 0; t < system.measurement_count(); ++t) {
    const int g = t / per_frame;
    std::copy(r.begin() + static_cast<std::ptrdiff_t>(t) * static_cast<std::ptrdiff_t>(k2),
              r.begin() + static_cast<std::ptrdiff_t>(t + 1) * static_cast<std::ptrdiff_t>(k2),
              y.data.begin());
    HiResFrame xt = adjoint(system.map, system.geometry, system.patterns[t], y);
    HiResFrame& dst = x.frames[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += xt.data[i];
  }
  return x;
}

std::vector<double> flatten_measurements(const StackedSystem& system) {
  std::vector<double> out;
  out.reserve(system.total_rows());
  for (const auto& y : system.measurements) {
    out.insert(out.end(), y.data.begin(), y.data.end());
  }
  return out;
}

}  // namespace fpacs
