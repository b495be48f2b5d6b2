#include "fpacs/rates.hpp"

#include <cmath>

#include "fpacs/types.hpp"

namespace fpacs {

RateReport rate_report(int sensor_side, double f_dmd, double alpha,
                       const std::vector<double>& megapixels) {
  if (sensor_side < 1) throw ConfigError("sensor side must be >= 1");
  if (!(f_dmd > 0.0) || !std::isfinite(f_dmd))
    throw ConfigError("f_dmd must be positive and finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ConfigError("alpha must be positive and finite");

  RateReport report;
  report.measurement_rate =
      static_cast<double>(sensor_side) * sensor_side * f_dmd;
  report.alpha = alpha;
  report.str = alpha * report.measurement_rate;
  report.achievable.reserve(megapixels.size());
  for (double mp : megapixels) {
    if (!(mp > 0.0)) throw ConfigError("frame size must be positive");
    report.achievable.emplace_back(mp, report.str / (mp * 1e6));
  }
  return report;
}

double compression_factor(std::uint64_t n_dmd_pixels, int t_count,
                          std::uint64_t n_sensor_pixels) {
  if (n_dmd_pixels == 0 || n_sensor_pixels == 0 || t_count < 1)
    throw ConfigError("compression factor needs positive pixel counts and T");
  return static_cast<double>(n_dmd_pixels) /
         (static_cast<double>(t_count) * static_cast<double>(n_sensor_pixels));
}

}  // namespace fpacs
