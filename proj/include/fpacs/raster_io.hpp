#pragma once

#include <string>

#include "fpacs/frame.hpp"

namespace fpacs {

// Lossless-enough float raster: magic "FPFR", u32 version, u64 rows,
// u64 cols (little-endian), then rows*cols f32 values row-major.
void save_frame_fpfr(const HiResFrame& frame, const std::string& path);
HiResFrame load_frame_fpfr(const std::string& path);
void save_sensor_fpfr(const SensorFrame& frame, const std::string& path);
SensorFrame load_sensor_fpfr(const std::string& path);

// 16-bit big-endian binary P5 graymap for display; values scaled by
// peak (peak <= 0 means max of the data, all-zero frames stay zero).
void save_frame_pgm16(const HiResFrame& frame, const std::string& path,
                      double peak = 0.0);

}  // namespace fpacs
