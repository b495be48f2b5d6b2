#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fpacs {

// STR arithmetic: M_r = K^2 * f_dmd samples/s, str = alpha * M_r, and
// the frame rates that str buys at various frame sizes.
struct RateReport {
  double measurement_rate = 0.0;  // samples/s
  double alpha = 0.0;
  double str = 0.0;               // recovered pixels/s
  std::vector<std::pair<double, double>> achievable;  // (megapixels, fps)
};

RateReport rate_report(int sensor_side, double f_dmd, double alpha,
                       const std::vector<double>& megapixels = {0.25, 0.5, 1.0,
                                                                2.0, 4.0});

// alpha = n_dmd / (T * n_sensor): recovered pixels per measured sample.
double compression_factor(std::uint64_t n_dmd_pixels, int t_count,
                          std::uint64_t n_sensor_pixels);

}  // namespace fpacs
