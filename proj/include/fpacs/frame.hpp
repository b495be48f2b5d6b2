#pragma once

#include <cstddef>
#include <vector>

#include "fpacs/types.hpp"

namespace fpacs {

// A scene (or reconstruction) at DMD resolution, row-major.
struct HiResFrame {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  HiResFrame() = default;
  HiResFrame(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return data.size(); }

  void validate_shape() const {
    if (rows < 1 || cols < 1 || data.size() != static_cast<std::size_t>(rows) * cols)
      throw ConfigError("frame dimensions inconsistent with data length");
  }
};

// One coded low-resolution measurement.
struct SensorFrame {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
  int timestamp_index = 0;

  SensorFrame() = default;
  SensorFrame(int r, int c, int t = 0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0), timestamp_index(t) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return data.size(); }
};

// An ordered stack of equally-sized frames.
struct VideoCube {
  std::vector<HiResFrame> frames;
  double frame_rate = 0.0;  // [fps]

  int frame_count() const { return static_cast<int>(frames.size()); }
  int rows() const { return frames.empty() ? 0 : frames.front().rows; }
  int cols() const { return frames.empty() ? 0 : frames.front().cols; }

  void validate() const {
    if (frames.empty()) throw ConfigError("video cube needs at least one frame");
    for (const auto& f : frames) {
      f.validate_shape();
      if (f.rows != rows() || f.cols != cols())
        throw ConfigError("video cube frames differ in size");
    }
  }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

}  // namespace fpacs
