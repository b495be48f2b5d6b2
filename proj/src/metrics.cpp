#include "fpacs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpacs/types.hpp"

namespace fpacs {

namespace {

void check_same_shape(const HiResFrame& x, const HiResFrame& ref) {
  x.validate_shape();
  ref.validate_shape();
  if (x.rows != ref.rows || x.cols != ref.cols)
    throw ConfigError("metric inputs differ in shape");
}

double max_value(const HiResFrame& f) {
  return *std::max_element(f.data.begin(), f.data.end());
}

double psnr_from(double mse, double peak) {
  if (!(peak > 0.0)) throw ConfigError("psnr peak must be positive");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace

double psnr(const HiResFrame& x, const HiResFrame& ref, double peak) {
  check_same_shape(x, ref);
  double se = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double d = x.data[i] - ref.data[i];
    se += d * d;
  }
  if (peak <= 0.0) peak = max_value(ref);
  return psnr_from(se / static_cast<double>(x.data.size()), peak);
}

double psnr(const VideoCube& x, const VideoCube& ref, double peak) {
  x.validate();
  ref.validate();
  if (x.frame_count() != ref.frame_count())
    throw ConfigError("metric inputs differ in frame count");
  double se = 0.0;
  std::size_t n = 0;
  double auto_peak = 0.0;
  for (int f = 0; f < x.frame_count(); ++f) {
    check_same_shape(x.frames[f], ref.frames[f]);
    for (std::size_t i = 0; i < x.frames[f].data.size(); ++i) {
      const double d = x.frames[f].data[i] - ref.frames[f].data[i];
      se += d * d;
    }
    n += x.frames[f].data.size();
    auto_peak = std::max(auto_peak, max_value(ref.frames[f]));
  }
  if (peak <= 0.0) peak = auto_peak;
  return psnr_from(se / static_cast<double>(n), peak);
}

namespace {

// 11-tap Gaussian, sigma 1.5 (window renormalized per pixel at borders)
constexpr int kWinRadius = 5;

const std::vector<double>& window_taps() {
  static const std::vector<double> taps = [] {
    std::vector<double> t(2 * kWinRadius + 1);
    for (int d = -kWinRadius; d <= kWinRadius; ++d)
      t[d + kWinRadius] = std::exp(-0.5 * (d / 1.5) * (d / 1.5));
    return t;
  }();
  return taps;
}

double ssim_frame(const HiResFrame& x, const HiResFrame& y, double peak) {
  check_same_shape(x, y);
  if (!(peak > 0.0)) throw ConfigError("ssim peak must be positive");
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const auto& taps = window_taps();

  double total = 0.0;
  for (int r = 0; r < x.rows; ++r) {
    for (int c = 0; c < x.cols; ++c) {
      double w_sum = 0.0, mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0, mxy = 0.0;
      for (int dr = -kWinRadius; dr <= kWinRadius; ++dr) {
        const int rr = r + dr;
        if (rr < 0 || rr >= x.rows) continue;
        for (int dc = -kWinRadius; dc <= kWinRadius; ++dc) {
          const int cc = c + dc;
          if (cc < 0 || cc >= x.cols) continue;
          const double w = taps[dr + kWinRadius] * taps[dc + kWinRadius];
          const double xv = x.at(rr, cc);
          const double yv = y.at(rr, cc);
          w_sum += w;
          mx += w * xv;
          my += w * yv;
          mxx += w * xv * xv;
          myy += w * yv * yv;
          mxy += w * xv * yv;
        }
      }
      mx /= w_sum;
      my /= w_sum;
      const double vx = mxx / w_sum - mx * mx;
      const double vy = myy / w_sum - my * my;
      const double cov = mxy / w_sum - mx * my;
      const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
    }
  }
  return total / static_cast<double>(x.data.size());
}

}  // namespace

double ssim(const HiResFrame& x, const HiResFrame& ref, double peak) {
  if (peak <= 0.0) peak = std::max(max_value(x), max_value(ref));
  return ssim_frame(x, ref, peak);
}

double ssim(const VideoCube& x, const VideoCube& ref, double peak) {
  x.validate();
  ref.validate();
  if (x.frame_count() != ref.frame_count())
    throw ConfigError("metric inputs differ in frame count");
  if (peak <= 0.0) {
    for (int f = 0; f < x.frame_count(); ++f)
      peak = std::max({peak, max_value(x.frames[f]), max_value(ref.frames[f])});
  }
  double total = 0.0;
  for (int f = 0; f < x.frame_count(); ++f)
    total += ssim_frame(x.frames[f], ref.frames[f], peak);
  return total / x.frame_count();
}

}  // namespace fpacs
