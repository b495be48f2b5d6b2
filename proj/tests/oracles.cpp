#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include "fpacs/rng.hpp"

namespace fpacs::testing {

namespace {

std::vector<double> unit_taps(double sigma, int& radius) {
  if (sigma <= 0.0) {
    radius = 0;
    return {1.0};
  }
  radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> t(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    t[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += t[static_cast<std::size_t>(k + radius)];
  }
  for (auto& v : t) v /= sum;
  return t;
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

Eigen::MatrixXd dense_map(const SparseMap& map) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(map.n_sensor_pixels),
      static_cast<Eigen::Index>(map.n_dmd_pixels));
  for (const auto& e : map.entries)
    out(static_cast<Eigen::Index>(e.sensor_index),
        static_cast<Eigen::Index>(e.dmd_index)) += e.weight;
  return out;
}

Eigen::MatrixXd dense_map_oracle(const GeometryConfig& geometry,
                                 const OpticsConfig& optics) {
  const int rows = geometry.dmd_rows, cols = geometry.dmd_cols;
  const int n = rows * cols;
  int rad_obj = 0, rad_rel = 0;
  const std::vector<double> t_obj = unit_taps(optics.objective_blur_sigma, rad_obj);
  const std::vector<double> t_rel = unit_taps(optics.relay_blur_sigma, rad_rel);

  auto scatter = [&](const Eigen::VectorXd& src, const std::vector<double>& taps,
                     int rad) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double mass = src[r * cols + c];
        if (mass == 0.0) continue;
        double in_bounds = 0.0;
        for (int dr = -rad; dr <= rad; ++dr) {
          for (int dc = -rad; dc <= rad; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
            in_bounds += taps[static_cast<std::size_t>(dr + rad)] *
                         taps[static_cast<std::size_t>(dc + rad)];
          }
        }
        for (int dr = -rad; dr <= rad; ++dr) {
          for (int dc = -rad; dc <= rad; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
            out[rr * cols + cc] += mass *
                                   taps[static_cast<std::size_t>(dr + rad)] *
                                   taps[static_cast<std::size_t>(dc + rad)] /
                                   in_bounds;
          }
        }
      }
    }
    return out;
  };

  Eigen::MatrixXd c_mat = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(geometry.n_sensor_pixels()), n);
  const double inv_area = 1.0 / (geometry.block_rows * geometry.block_cols);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd impulse = Eigen::VectorXd::Zero(n);
    impulse[j] = 1.0;
    const Eigen::VectorXd blurred = scatter(scatter(impulse, t_obj, rad_obj), t_rel, rad_rel);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double mass = blurred[r * cols + c];
        if (mass == 0.0) continue;
        const int sr = floor_div(r - optics.shift_rows, geometry.block_rows);
        const int sc = floor_div(c - optics.shift_cols, geometry.block_cols);
        if (sr < 0 || sr >= geometry.sensor_rows || sc < 0 || sc >= geometry.sensor_cols)
          continue;
        c_mat(sr * geometry.sensor_cols + sc, j) += mass * inv_area;
      }
    }
  }
  return c_mat;
}

Eigen::MatrixXd dense_stacked(const StackedSystem& system) {
  const auto k2 = static_cast<Eigen::Index>(system.geometry.n_sensor_pixels());
  const auto n = static_cast<Eigen::Index>(system.geometry.n_dmd_pixels());
  const int t_count = system.measurement_count();
  const int per_frame = system.measurements_per_frame();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(system.total_rows()),
      static_cast<Eigen::Index>(system.total_cols()));
  for (int t = 0; t < t_count; ++t) {
    const Eigen::Index g = t / per_frame;
    const auto& pattern = system.patterns[t];
    for (const auto& e : system.map.entries) {
      if (pattern.data[e.dmd_index] == 0) continue;
      a(static_cast<Eigen::Index>(t) * k2 + static_cast<Eigen::Index>(e.sensor_index),
        g * n + static_cast<Eigen::Index>(e.dmd_index)) = e.weight;
    }
  }
  return a;
}

Eigen::VectorXd least_squares_oracle(const Eigen::MatrixXd& a,
                                     const Eigen::VectorXd& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

HiResFrame per_block_least_squares(const StackedSystem& system) {
  const auto& g = system.geometry;
  const int t_count = system.measurement_count();
  // mirrors seen by each sensor pixel; ideal optics makes these the
  // disjoint blocks
  std::vector<std::vector<std::pair<std::uint64_t, double>>> columns(
      g.n_sensor_pixels());
  for (const auto& e : system.map.entries)
    columns[e.sensor_index].emplace_back(e.dmd_index, e.weight);

  HiResFrame x(g.dmd_rows, g.dmd_cols, 0.0);
  for (std::uint64_t i = 0; i < g.n_sensor_pixels(); ++i) {
    const auto& cols = columns[i];
    Eigen::MatrixXd a(t_count, static_cast<Eigen::Index>(cols.size()));
    Eigen::VectorXd b(t_count);
    for (int t = 0; t < t_count; ++t) {
      const auto& pattern = system.patterns[t];
      for (std::size_t k = 0; k < cols.size(); ++k)
        a(t, static_cast<Eigen::Index>(k)) =
            pattern.data[cols[k].first] ? cols[k].second : 0.0;
      b[t] = system.measurements[static_cast<std::size_t>(t)].data[i];
    }
    const Eigen::VectorXd sol = least_squares_oracle(a, b);
    for (std::size_t k = 0; k < cols.size(); ++k)
      x.data[cols[k].first] = sol[static_cast<Eigen::Index>(k)];
  }
  return x;
}

std::vector<double> two_level_prox_oracle(double a, int n_a, double b, int n_b,
                                          double lambda) {
  const double sign = b >= a ? 1.0 : -1.0;
  const double a_new = a + sign * lambda / n_a;
  const double b_new = b - sign * lambda / n_b;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_a + n_b));
  out.insert(out.end(), static_cast<std::size_t>(n_a), a_new);
  out.insert(out.end(), static_cast<std::size_t>(n_b), b_new);
  return out;
}

VideoCube median_filter_oracle(const VideoCube& cube, int radius_rows,
                               int radius_cols, int radius_frames) {
  VideoCube out = cube;
  const int nf = cube.frame_count(), nr = cube.rows(), nc = cube.cols();
  auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
  std::vector<double> window;
  for (int f = 0; f < nf; ++f) {
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) {
        window.clear();
        for (int df = -radius_frames; df <= radius_frames; ++df)
          for (int dr = -radius_rows; dr <= radius_rows; ++dr)
            for (int dc = -radius_cols; dc <= radius_cols; ++dc)
              window.push_back(
                  cube.frames[static_cast<std::size_t>(clampi(f + df, nf))].at(
                      clampi(r + dr, nr), clampi(c + dc, nc)));
        std::sort(window.begin(), window.end());
        out.frames[static_cast<std::size_t>(f)].at(r, c) = window[window.size() / 2];
      }
    }
  }
  return out;
}

HiResFrame random_frame(int rows, int cols, std::uint64_t seed) {
  SeededRng rng(seed);
  HiResFrame f(rows, cols, 0.0);
  for (auto& v : f.data) v = rng.uniform();
  return f;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.gaussian();
  return out;
}

GeometryConfig make_geometry(int dmd_rows, int dmd_cols, int sensor_rows,
                             int sensor_cols, double f_dmd) {
  GeometryConfig g;
  g.dmd_rows = dmd_rows;
  g.dmd_cols = dmd_cols;
  g.sensor_rows = sensor_rows;
  g.sensor_cols = sensor_cols;
  g.block_rows = dmd_rows / sensor_rows;
  g.block_cols = dmd_cols / sensor_cols;
  g.f_dmd = f_dmd;
  return g;
}

}  // namespace fpacs::testing
