#pragma once

#include <vector>

#include "fpacs/frame.hpp"
#include "fpacs/sparse_map.hpp"
#include "fpacs/types.hpp"

namespace fpacs {

struct CalibrationCapture {
  int pattern_index = 0;
  SensorFrame frame;
};

// One grouped impulse-scan session: pattern p of a pixel-scan sequence
// over a group_rows x group_cols grid pulses one mirror per group, so
// every mirror is pulsed exactly once across the run.
struct CalibrationRun {
  GeometryConfig geometry;
  OpticsConfig true_optics;
  int group_rows = 0;
  int group_cols = 0;
  std::vector<CalibrationCapture> captures;
  NoiseSpec noise;
};

struct CalibrationEstimate {
  SparseMap map_est;
  double support_threshold = 0.0;
  // per-column relative L2 error vs ground truth; empty unless a truth
  // map was supplied to estimate_map
  std::vector<double> residual_stats;
};

struct CalibrationError {
  double support_precision = 0.0;
  double support_recall = 0.0;
  double frobenius_rel_error = 0.0;
  bool no_predictions = false;  // empty estimate; precision = 1 by convention
};

// Simulates the scan against build_map(geometry, optics) with a uniform
// white scene, so each capture records the summed columns of the pulsed
// mirrors.
CalibrationRun run_calibration(const GeometryConfig& geometry,
                               const OpticsConfig& optics, int group_rows,
                               int group_cols, const NoiseSpec& noise);

// Column j of the estimate = the sensor readings nearest to mirror j in
// the capture that pulsed it (each sensor pixel's reading is assigned
// whole to the nearest simultaneously pulsed mirror), thresholded at
// support_threshold * column max and clamped at 0.
CalibrationEstimate estimate_map(const CalibrationRun& run,
                                 double support_threshold = 0.01,
                                 const SparseMap* truth = nullptr);

CalibrationError calibration_error(const SparseMap& est, const SparseMap& truth);

}  // namespace fpacs
