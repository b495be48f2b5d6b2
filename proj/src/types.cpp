#include "fpacs/types.hpp"

#include <cmath>
#include <string>

namespace fpacs {

void GeometryConfig::validate() const {
  if (dmd_rows <= 0 || dmd_cols <= 0 || sensor_rows <= 0 || sensor_cols <= 0 ||
      block_rows <= 0 || block_cols <= 0) {
    throw ConfigError("geometry dimensions must be positive");
  }
  if (dmd_rows != sensor_rows * block_rows || dmd_cols != sensor_cols * block_cols) {
    throw ConfigError("DMD grid must tile the sensor grid exactly: dmd = sensor * block");
  }
  if (!(f_dmd > 0.0) || !std::isfinite(f_dmd)) {
    throw ConfigError("f_dmd must be a positive, finite rate");
  }
}

void OpticsConfig::validate(const GeometryConfig& geometry) const {
  if (!std::isfinite(objective_blur_sigma) || objective_blur_sigma < 0.0 ||
      !std::isfinite(relay_blur_sigma) || relay_blur_sigma < 0.0) {
    throw ConfigError("blur sigmas must be finite and non-negative");
  }
  if (shift_rows <= -geometry.block_rows || shift_rows >= geometry.block_rows ||
      shift_cols <= -geometry.block_cols || shift_cols >= geometry.block_cols) {
    throw ConfigError("block-grid shift must stay within one block");
  }
}

void NoiseSpec::validate() const {
  if (snr_db && !std::isfinite(*snr_db)) {
    throw ConfigError("snr_db must be finite when given");
  }
}

}  // namespace fpacs
