#include "fpacs/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fpacs/forward_model.hpp"
#include "fpacs/pattern.hpp"

namespace fpacs {

CalibrationRun run_calibration(const GeometryConfig& geometry,
                               const OpticsConfig& optics, int group_rows,
                               int group_cols, const NoiseSpec& noise) {
  geometry.validate();
  optics.validate(geometry);
  noise.validate();

  const SparseMap map = build_map(geometry, optics);
  const PatternSequence scan = pixel_scan_sequence(geometry, group_rows, group_cols);
  const HiResFrame white(geometry.dmd_rows, geometry.dmd_cols, 1.0);
  std::vector<SensorFrame> frames = simulate_capture(map, geometry, scan, white, noise);

  CalibrationRun run;
  run.geometry = geometry;
  run.true_optics = optics;
  run.group_rows = group_rows;
  run.group_cols = group_cols;
  run.noise = noise;
  run.captures.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t)
    run.captures.push_back({static_cast<int>(t), std::move(frames[t])});
  return run;
}

namespace {

struct PulsedMirror {
  int row = 0;
  int col = 0;
  std::uint64_t dmd_index = 0;
};

// Mirrors pulsed by scan pattern p: the p-th (row-major) cell of every
// group large enough to have one.
std::vector<PulsedMirror> pulsed_mirrors(const GeometryConfig& g, int group_rows,
                                         int group_cols, int p) {
  std::vector<PulsedMirror> out;
  for (int gr = 0; gr < group_rows; ++gr) {
    const GroupExtent er = group_extent(g.dmd_rows, group_rows, gr);
    for (int gc = 0; gc < group_cols; ++gc) {
      const GroupExtent ec = group_extent(g.dmd_cols, group_cols, gc);
      if (p >= er.size() * ec.size()) continue;
      const int r = er.begin + p / ec.size();
      const int c = ec.begin + p % ec.size();
      out.push_back({r, c, static_cast<std::uint64_t>(r) * g.dmd_cols + c});
    }
  }
  return out;
}

}  // namespace

CalibrationEstimate estimate_map(const CalibrationRun& run, double support_threshold,
                                 const SparseMap* truth) {
  run.geometry.validate();
  if (!(support_threshold > 0.0 && support_threshold < 1.0))
    throw ConfigError("support threshold must lie in (0,1)");
  if (run.group_rows < 1 || run.group_cols < 1 ||
      run.group_rows > run.geometry.dmd_rows || run.group_cols > run.geometry.dmd_cols)
    throw ConfigError("calibration group grid does not tile the DMD");

  // completeness: the scan needs pattern indices 0..max_group-1, once each
  int max_group = 0;
  for (int gr = 0; gr < run.group_rows; ++gr)
    for (int gc = 0; gc < run.group_cols; ++gc)
      max_group = std::max(max_group,
                           group_extent(run.geometry.dmd_rows, run.group_rows, gr).size() *
                               group_extent(run.geometry.dmd_cols, run.group_cols, gc).size());
  std::vector<char> seen(static_cast<std::size_t>(max_group), 0);
  int covered = 0;
  for (const auto& cap : run.captures) {
    if (cap.pattern_index < 0 || cap.pattern_index >= max_group ||
        seen[static_cast<std::size_t>(cap.pattern_index)])
      throw ConfigError("calibration run is not a complete single-pulse scan");
    seen[static_cast<std::size_t>(cap.pattern_index)] = 1;
    ++covered;
    if (cap.frame.rows != run.geometry.sensor_rows ||
        cap.frame.cols != run.geometry.sensor_cols)
      throw ConfigError("calibration capture shape mismatch");
  }
  if (covered != max_group)
    throw ConfigError("calibration run is incomplete: not every mirror was pulsed");

  // raw per-capture assignment: each sensor reading goes to the nearest
  // pulsed mirror (sensor pixel centers in DMD coordinates)
  std::vector<MapEntry> raw;
  raw.reserve(run.captures.size() * static_cast<std::size_t>(run.geometry.n_sensor_pixels()));
  for (const auto& cap : run.captures) {
    const auto pulses =
        pulsed_mirrors(run.geometry, run.group_rows, run.group_cols, cap.pattern_index);
    for (int sr = 0; sr < run.geometry.sensor_rows; ++sr) {
      const double center_r = (sr + 0.5) * run.geometry.block_rows - 0.5;
      for (int sc = 0; sc < run.geometry.sensor_cols; ++sc) {
        const double center_c = (sc + 0.5) * run.geometry.block_cols - 0.5;
        const PulsedMirror* best = nullptr;
        double best_d2 = 0.0;
        for (const auto& m : pulses) {
          const double dr = center_r - m.row;
          const double dc = center_c - m.col;
          const double d2 = dr * dr + dc * dc;
          if (!best || d2 < best_d2 || (d2 == best_d2 && m.dmd_index < best->dmd_index)) {
            best = &m;
            best_d2 = d2;
          }
        }
        const double w = cap.frame.at(sr, sc);
        if (w <= 0.0) continue;  // noise can go negative; zero is no support
        raw.push_back({static_cast<std::uint64_t>(sr) * run.geometry.sensor_cols + sc,
                       best->dmd_index, w});
      }
    }
  }

  // threshold per column at tau * column max
  std::sort(raw.begin(), raw.end(), [](const MapEntry& a, const MapEntry& b) {
    return a.dmd_index != b.dmd_index ? a.dmd_index < b.dmd_index
                                      : a.sensor_index < b.sensor_index;
  });
  std::vector<MapEntry> kept;
  kept.reserve(raw.size());
  for (std::size_t lo = 0; lo < raw.size();) {
    std::size_t hi = lo;
    double col_max = 0.0;
    while (hi < raw.size() && raw[hi].dmd_index == raw[lo].dmd_index) {
      col_max = std::max(col_max, raw[hi].weight);
      ++hi;
    }
    const double cut = support_threshold * col_max;
    for (std::size_t k = lo; k < hi; ++k)
      if (raw[k].weight >= cut) kept.push_back(raw[k]);
    lo = hi;
  }

  CalibrationEstimate est;
  est.support_threshold = support_threshold;
  est.map_est.n_sensor_pixels = static_cast<std::uint64_t>(run.geometry.n_sensor_pixels());
  est.map_est.n_dmd_pixels = static_cast<std::uint64_t>(run.geometry.n_dmd_pixels());
  std::sort(kept.begin(), kept.end(), [](const MapEntry& a, const MapEntry& b) {
    return a.sensor_index != b.sensor_index ? a.sensor_index < b.sensor_index
                                            : a.dmd_index < b.dmd_index;
  });
  est.map_est.entries = std::move(kept);
  est.map_est.validate();

  if (truth) {
    if (truth->n_sensor_pixels != est.map_est.n_sensor_pixels ||
        truth->n_dmd_pixels != est.map_est.n_dmd_pixels)
      throw ConfigError("truth map dimensions do not match the run");
    // per-column L2 errors over the union support, column-sorted walks
    auto by_col = [](const SparseMap& m) {
      std::vector<MapEntry> v = m.entries;
      std::sort(v.begin(), v.end(), [](const MapEntry& a, const MapEntry& b) {
        return a.dmd_index != b.dmd_index ? a.dmd_index < b.dmd_index
                                          : a.sensor_index < b.sensor_index;
      });
      return v;
    };
    const auto ec = by_col(est.map_est);
    const auto tc = by_col(*truth);
    est.residual_stats.assign(static_cast<std::size_t>(truth->n_dmd_pixels), 0.0);
    std::size_t ie = 0, it = 0;
    while (it < tc.size()) {
      const std::uint64_t j = tc[it].dmd_index;
      double err2 = 0.0, ref2 = 0.0;
      while (ie < ec.size() && ec[ie].dmd_index < j) ++ie;  // spurious columns skipped
      std::size_t ke = ie, kt = it;
      while (kt < tc.size() && tc[kt].dmd_index == j) {
        double e = 0.0;
        while (ke < ec.size() && ec[ke].dmd_index == j &&
               ec[ke].sensor_index < tc[kt].sensor_index)
          ++ke;  // extra estimated entries counted below
        if (ke < ec.size() && ec[ke].dmd_index == j &&
            ec[ke].sensor_index == tc[kt].sensor_index) {
          e = ec[ke].weight - tc[kt].weight;
          ++ke;
        } else {
          e = -tc[kt].weight;
        }
        err2 += e * e;
        ref2 += tc[kt].weight * tc[kt].weight;
        ++kt;
      }
      for (std::size_t k = ie; k < ec.size() && ec[k].dmd_index == j; ++k) {
        bool in_truth = false;
        for (std::size_t k2 = it; k2 < kt; ++k2)
          if (tc[k2].sensor_index == ec[k].sensor_index) in_truth = true;
        if (!in_truth) err2 += ec[k].weight * ec[k].weight;
      }
      est.residual_stats[static_cast<std::size_t>(j)] =
          ref2 > 0.0 ? std::sqrt(err2 / ref2) : 0.0;
      it = kt;
    }
  }
  return est;
}

CalibrationError calibration_error(const SparseMap& est, const SparseMap& truth) {
  if (est.n_sensor_pixels != truth.n_sensor_pixels ||
      est.n_dmd_pixels != truth.n_dmd_pixels)
    throw ConfigError("calibration error: map dimensions differ");
  est.validate();
  truth.validate();

  // both entry lists are canonical (i, then j): one merge pass
  std::size_t ia = 0, ib = 0, inter = 0;
  double diff2 = 0.0, ref2 = 0.0;
  while (ia < est.entries.size() || ib < truth.entries.size()) {
    const bool a_left =
        ib >= truth.entries.size() ||
        (ia < est.entries.size() &&
         (est.entries[ia].sensor_index < truth.entries[ib].sensor_index ||
          (est.entries[ia].sensor_index == truth.entries[ib].sensor_index &&
           est.entries[ia].dmd_index < truth.entries[ib].dmd_index)));
    const bool b_left =
        ia >= est.entries.size() ||
        (ib < truth.entries.size() &&
         (truth.entries[ib].sensor_index < est.entries[ia].sensor_index ||
          (truth.entries[ib].sensor_index == est.entries[ia].sensor_index &&
           truth.entries[ib].dmd_index < est.entries[ia].dmd_index)));
    if (a_left && !b_left) {
      diff2 += est.entries[ia].weight * est.entries[ia].weight;
      ++ia;
    } else if (b_left && !a_left) {
      const double w = truth.entries[ib].weight;
      diff2 += w * w;
      ref2 += w * w;
      ++ib;
    } else {
      const double d = est.entries[ia].weight - truth.entries[ib].weight;
      diff2 += d * d;
      ref2 += truth.entries[ib].weight * truth.entries[ib].weight;
      ++inter;
      ++ia;
      ++ib;
    }
  }

  CalibrationError err;
  err.no_predictions = est.entries.empty();
  err.support_precision =
      est.entries.empty() ? 1.0 : static_cast<double>(inter) / est.entries.size();
  err.support_recall =
      truth.entries.empty() ? 1.0 : static_cast<double>(inter) / truth.entries.size();
  if (ref2 > 0.0) {
    err.frobenius_rel_error = std::sqrt(diff2 / ref2);
  } else {
    err.frobenius_rel_error = diff2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return err;
}

}  // namespace fpacs
