#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fpacs {

// Error categories map 1:1 onto CLI exit codes (config/usage = 2,
// numerical = 3, I/O = 4).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Sensor/DMD geometry. The DMD must tile exactly into sensor blocks:
// dmd_rows = sensor_rows * block_rows, dmd_cols = sensor_cols * block_cols.
struct GeometryConfig {
  int dmd_rows = 1024;
  int dmd_cols = 1024;
  int sensor_rows = 64;
  int sensor_cols = 64;
  int block_rows = 16;
  int block_cols = 16;
  double f_dmd = 480.0;  // modulation rate [Hz]

  int n_dmd_pixels() const { return dmd_rows * dmd_cols; }
  int n_sensor_pixels() const { return sensor_rows * sensor_cols; }
  int block_size() const { return block_rows * block_cols; }

  void validate() const;
};

// Optical degradations folded into the sensor-to-DMD map: two Gaussian
// blurs acting on the DMD plane (objective before relay) and an integer
// misalignment of the block grid. All default to the ideal system.
struct OpticsConfig {
  double objective_blur_sigma = 0.0;  // [DMD pixels]
  double relay_blur_sigma = 0.0;      // [DMD pixels], applied before integration
  int shift_rows = 0;                 // block-grid misalignment du, |du| < block_rows
  int shift_cols = 0;                 // dv, |dv| < block_cols

  bool ideal() const {
    return objective_blur_sigma == 0.0 && relay_blur_sigma == 0.0 &&
           shift_rows == 0 && shift_cols == 0;
  }

  void validate(const GeometryConfig& geometry) const;
};

// Additive white Gaussian measurement noise at a given SNR; absent snr_db
// means a noiseless capture.
struct NoiseSpec {
  std::optional<double> snr_db;
  std::uint64_t seed = 0;

  static NoiseSpec none() { return NoiseSpec{}; }
  static NoiseSpec at_snr(double db, std::uint64_t seed) {
    return NoiseSpec{db, seed};
  }

  void validate() const;
};

}  // namespace fpacs
