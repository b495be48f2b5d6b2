#pragma once

#include "fpacs/frame.hpp"

namespace fpacs {

// 10*log10(peak^2/mse); +inf when mse = 0. peak <= 0 means "use max(ref)".
double psnr(const HiResFrame& x, const HiResFrame& ref, double peak = 0.0);
double psnr(const VideoCube& x, const VideoCube& ref, double peak = 0.0);

// Mean local SSIM, 11x11 Gaussian window sigma 1.5 renormalized at the
// boundary, C1 = (0.01*peak)^2, C2 = (0.03*peak)^2. peak <= 0 means
// max over both inputs, which keeps the metric symmetric.
double ssim(const HiResFrame& x, const HiResFrame& ref, double peak = 0.0);
double ssim(const VideoCube& x, const VideoCube& ref, double peak = 0.0);

}  // namespace fpacs
