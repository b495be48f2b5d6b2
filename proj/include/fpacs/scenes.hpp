#pragma once

#include <string>

#include "fpacs/frame.hpp"
#include "fpacs/types.hpp"

namespace fpacs {

enum class ChartKind { Bars, UsafLike, Checker };

std::string chart_kind_name(ChartKind kind);
ChartKind chart_kind_from_name(const std::string& name);

struct ChartParams {
  double frequency = 0.03125;  // bars: cycles per DMD pixel, (0, 0.5]
  int cell = 8;                // checker cell edge in pixels
  int levels = 3;              // usaf-like: number of halving scales
};

// Deterministic synthetic test scenes, values in [0,1].
// bars: vertical square wave at `frequency`. checker: `cell`-sized
// checkerboard. usaf-like: tri-bar groups at `levels` halving scales.
HiResFrame make_chart(const GeometryConfig& geometry, ChartKind kind,
                      const ChartParams& params = {});

// `object` pasted into an empty frame at offset round(velocity * t) per
// frame, wrapping around the frame edges so it never leaves the field.
VideoCube make_moving_scene(const GeometryConfig& geometry, const HiResFrame& object,
                            double velocity_rows, double velocity_cols, int n_frames);

}  // namespace fpacs
