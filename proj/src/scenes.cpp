#include "fpacs/scenes.hpp"

#include <algorithm>
#include <cmath>

namespace fpacs {

std::string chart_kind_name(ChartKind kind) {
  switch (kind) {
    case ChartKind::Bars: return "bars";
    case ChartKind::UsafLike: return "usaf-like";
    case ChartKind::Checker: return "checker";
  }
  throw ConfigError("unknown chart kind");
}

ChartKind chart_kind_from_name(const std::string& name) {
  if (name == "bars") return ChartKind::Bars;
  if (name == "usaf-like" || name == "usaf") return ChartKind::UsafLike;
  if (name == "checker") return ChartKind::Checker;
  throw ConfigError("unknown chart kind: " + name);
}

namespace {

HiResFrame make_bars(const GeometryConfig& g, double frequency) {
  if (!(frequency > 0.0 && frequency <= 0.5))
    throw ConfigError("bar frequency must lie in (0, 0.5] cycles per pixel");
  HiResFrame f(g.dmd_rows, g.dmd_cols);
  for (int c = 0; c < g.dmd_cols; ++c) {
    const double phase = std::floor(static_cast<double>(c) * frequency * 2.0);
    const double v = (static_cast<long long>(phase) % 2 == 0) ? 1.0 : 0.0;
    for (int r = 0; r < g.dmd_rows; ++r) f.at(r, c) = v;
  }
  return f;
}

HiResFrame make_checker(const GeometryConfig& g, int cell) {
  if (cell < 1) throw ConfigError("checker cell must be >= 1");
  HiResFrame f(g.dmd_rows, g.dmd_cols);
  for (int r = 0; r < g.dmd_rows; ++r)
    for (int c = 0; c < g.dmd_cols; ++c)
      f.at(r, c) = ((r / cell + c / cell) % 2 == 0) ? 1.0 : 0.0;
  return f;
}

void fill_rect(HiResFrame& f, int r0, int c0, int h, int w) {
  const int r1 = std::min(f.rows, r0 + h);
  const int c1 = std::min(f.cols, c0 + w);
  for (int r = std::max(0, r0); r < r1; ++r)
    for (int c = std::max(0, c0); c < c1; ++c) f.at(r, c) = 1.0;
}

// Tri-bar groups (three vertical on the left, three horizontal on the
// right) at halving bar widths, one band per level.
HiResFrame make_usaf_like(const GeometryConfig& g, int levels) {
  if (levels < 1) throw ConfigError("usaf-like chart needs levels >= 1");
  HiResFrame f(g.dmd_rows, g.dmd_cols);
  const int band = std::max(1, g.dmd_rows / levels);
  const int base = std::max(1, g.dmd_cols / 16);
  for (int k = 0; k < levels; ++k) {
    const int w = std::max(1, base >> k);
    const int top = k * band + std::max(1, band / 8);
    const int len = std::max(2 * w, std::min(5 * w, band - 2 * std::max(1, band / 8)));
    for (int b = 0; b < 3; ++b) {
      fill_rect(f, top, w + b * 2 * w, len, w);                       // vertical
      fill_rect(f, top + b * 2 * w, g.dmd_cols / 2 + w, w, len);      // horizontal
    }
  }
  return f;
}

}  // namespace

HiResFrame make_chart(const GeometryConfig& geometry, ChartKind kind,
                      const ChartParams& params) {
  geometry.validate();
  switch (kind) {
    case ChartKind::Bars: return make_bars(geometry, params.frequency);
    case ChartKind::Checker: return make_checker(geometry, params.cell);
    case ChartKind::UsafLike: return make_usaf_like(geometry, params.levels);
  }
  throw ConfigError("unknown chart kind");
}

VideoCube make_moving_scene(const GeometryConfig& geometry, const HiResFrame& object,
                            double velocity_rows, double velocity_cols, int n_frames) {
  geometry.validate();
  object.validate_shape();
  if (n_frames < 1) throw ConfigError("moving scene needs at least one frame");
  if (object.rows > geometry.dmd_rows || object.cols > geometry.dmd_cols)
    throw ConfigError("object exceeds frame");
  if (!std::isfinite(velocity_rows) || !std::isfinite(velocity_cols))
    throw ConfigError("velocity must be finite");

  VideoCube cube;
  cube.frame_rate = geometry.f_dmd;
  cube.frames.reserve(static_cast<std::size_t>(n_frames));
  for (int t = 0; t < n_frames; ++t) {
    HiResFrame frame(geometry.dmd_rows, geometry.dmd_cols);
    const long long off_r = std::llround(velocity_rows * t);
    const long long off_c = std::llround(velocity_cols * t);
    for (int r = 0; r < object.rows; ++r) {
      // wraps so the object stays fully in frame at any velocity
      const int dr = static_cast<int>(((off_r + r) % geometry.dmd_rows +
                                       geometry.dmd_rows) % geometry.dmd_rows);
      for (int c = 0; c < object.cols; ++c) {
        const int dc = static_cast<int>(((off_c + c) % geometry.dmd_cols +
                                         geometry.dmd_cols) % geometry.dmd_cols);
        frame.at(dr, dc) = object.at(r, c);
      }
    }
    cube.frames.push_back(std::move(frame));
  }
  return cube;
}

}  // namespace fpacs
