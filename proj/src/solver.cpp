#include "fpacs/solver.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <utility>

#include "fpacs/binary_io.hpp"
#include "fpacs/rng.hpp"

namespace fpacs {

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("solver lambda must be positive and finite");
  if (max_iters < 1) throw ConfigError("solver max_iters must be positive");
  if (inner_prox_iters < 1) throw ConfigError("solver inner_prox_iters must be positive");
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ConfigError("solver tol must be >= 0");
  if (!(step >= 0.0) || !std::isfinite(step))
    throw ConfigError("solver step must be >= 0 (0 = auto)");
}

namespace {

double cube_dot(const VideoCube& a, const VideoCube& b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.frames.size(); ++f)
    s += dot(a.frames[f].data, b.frames[f].data);
  return s;
}

double cube_norm2(const VideoCube& a) {
  double s = 0.0;
  for (const auto& f : a.frames) s += norm2(f.data);
  return s;
}

VideoCube zero_cube(const StackedSystem& system) {
  VideoCube x;
  x.frames.assign(static_cast<std::size_t>(system.frame_count),
                  HiResFrame(system.geometry.dmd_rows, system.geometry.dmd_cols));
  return x;
}

}  // namespace

double lipschitz_estimate(const StackedSystem& system) {
  system.validate();
  // fixed start seed: the estimate is part of the deterministic pipeline
  SeededRng rng(0x9d2c5680u);
  VideoCube v = zero_cube(system);
  for (auto& f : v.frames)
    for (double& x : f.data) x = rng.gaussian();
  double nv = std::sqrt(cube_norm2(v));
  if (nv == 0.0) throw NumericalError("power iteration start vector is zero");
  for (auto& f : v.frames)
    for (double& x : f.data) x /= nv;

  double eig = 0.0;
  const int max_iters = 50;
  for (int it = 0; it < max_iters; ++it) {
    const std::vector<double> av = apply_stacked(system, v);
    VideoCube w = apply_stacked_adjoint(system, av);
    const double eig_new = std::sqrt(cube_norm2(w));  // ||A^T A v||, v unit
    if (eig_new == 0.0) throw NumericalError("operator is numerically zero");
    for (auto& f : w.frames)
      for (double& x : f.data) x /= eig_new;
    v = std::move(w);
    const double rel = std::abs(eig_new - eig) / eig_new;
    eig = eig_new;
    if (it > 0 && rel < 1e-6) break;
  }
  return eig * 1.05;
}

ReconResult solve(const StackedSystem& system, TvKind kind, const SolverConfig& cfg) {
  system.validate();
  cfg.validate();
  if (kind == TvKind::TV3D && system.frame_count < 2)
    throw ConfigError("3D TV needs at least two frames");

  const std::vector<double> y = flatten_measurements(system);
  const double step = cfg.step > 0.0 ? cfg.step : 1.0 / lipschitz_estimate(system);

  auto objective = [&](const VideoCube& x, double& data_term, double& tv_term) {
    std::vector<double> ax = apply_stacked(system, x);
    double d = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      const double r = ax[i] - y[i];
      d += r * r;
    }
    data_term = 0.5 * d;
    tv_term = tv_value(x, kind);
    return data_term + cfg.lambda * tv_term;
  };

  // adjoint-initialized start
  VideoCube x = apply_stacked_adjoint(system, y);
  VideoCube y_vec = x;
  double t = 1.0;
  double f_prev, d_prev, tv_prev;
  f_prev = objective(x, d_prev, tv_prev);

  ReconResult result;
  result.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters));
  detail::TvProxState prox_state;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    // gradient step at the momentum point
    std::vector<double> ay = apply_stacked(system, y_vec);
    for (std::size_t i = 0; i < ay.size(); ++i) ay[i] -= y[i];
    VideoCube grad = apply_stacked_adjoint(system, ay);
    VideoCube v = y_vec;
    for (std::size_t f = 0; f < v.frames.size(); ++f)
      for (std::size_t i = 0; i < v.frames[f].data.size(); ++i)
        v.frames[f].data[i] -= step * grad.frames[f].data[i];

    VideoCube z = detail::tv_prox_constrained(v, cfg.lambda * step, kind,
                                              cfg.inner_prox_iters, cfg.nonneg,
                                              prox_state);
    double d_z, tv_z;
    const double f_z = objective(z, d_z, tv_z);
    if (!std::isfinite(f_z))
      throw NumericalError("objective diverged at iteration " + std::to_string(it));

    bool accepted = f_z <= f_prev;
    if (accepted) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      y_vec = z;
      for (std::size_t f = 0; f < y_vec.frames.size(); ++f)
        for (std::size_t i = 0; i < y_vec.frames[f].data.size(); ++i)
          y_vec.frames[f].data[i] +=
              beta * (z.frames[f].data[i] - x.frames[f].data[i]);
      x = std::move(z);
      t = t_next;
    } else {
      // keep the best iterate, drop momentum
      y_vec = x;
      t = 1.0;
    }

    const double f_new = accepted ? f_z : f_prev;
    result.objective_trace.push_back(f_new);
    result.data_trace.push_back(accepted ? d_z : d_prev);
    result.tv_trace.push_back(accepted ? tv_z : tv_prev);
    result.iterations_run = it;

    if (accepted) {
      const double denom = std::max(std::abs(f_prev), 1e-300);
      const bool small = std::abs(f_prev - f_z) / denom < cfg.tol;
      d_prev = d_z;
      tv_prev = tv_z;
      f_prev = f_z;
      if (cfg.tol > 0.0 && small) {
        result.converged = true;
        break;
      }
    }
  }

  result.estimate = std::move(x);
  // effective recovered frame rate: one output frame per T/frame_count patterns
  result.estimate.frame_rate =
      system.geometry.f_dmd / static_cast<double>(system.measurements_per_frame());
  return result;
}

HiResFrame least_squares_baseline(const StackedSystem& system) {
  system.validate();
  if (system.frame_count != 1)
    throw ConfigError("least-squares baseline handles single-frame systems only");

  const std::vector<double> y = flatten_measurements(system);
  auto normal_apply = [&](const VideoCube& p) {
    return apply_stacked_adjoint(system, apply_stacked(system, p));
  };

  VideoCube b = apply_stacked_adjoint(system, y);
  VideoCube x = zero_cube(system);
  VideoCube r = b;
  VideoCube p = r;
  double rs = cube_norm2(r);
  const double b_norm2 = cube_norm2(b);
  if (b_norm2 == 0.0) return x.frames.front();

  for (int it = 0; it < 200 && rs > 1e-26 * b_norm2; ++it) {
    VideoCube ap = normal_apply(p);
    const double p_ap = cube_dot(p, ap);
    if (p_ap <= 0.0) break;
    const double alpha = rs / p_ap;
    for (std::size_t f = 0; f < x.frames.size(); ++f)
      for (std::size_t i = 0; i < x.frames[f].data.size(); ++i) {
        x.frames[f].data[i] += alpha * p.frames[f].data[i];
        r.frames[f].data[i] -= alpha * ap.frames[f].data[i];
      }
    const double rs_new = cube_norm2(r);
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t f = 0; f < p.frames.size(); ++f)
      for (std::size_t i = 0; i < p.frames[f].data.size(); ++i)
        p.frames[f].data[i] = r.frames[f].data[i] + beta * p.frames[f].data[i];
  }
  return x.frames.front();
}

void save_trace_csv(const ReconResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "iteration,objective,data_term,tv_term\n";
  os.precision(17);
  for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
    os << (i + 1) << ',' << result.objective_trace[i] << ',' << result.data_trace[i]
       << ',' << result.tv_trace[i] << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace fpacs
