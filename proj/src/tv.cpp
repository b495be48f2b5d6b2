#include "fpacs/tv.hpp"

#include <algorithm>
#include <cmath>

#include "fpacs/types.hpp"

namespace fpacs {

std::string tv_kind_name(TvKind kind) {
  return kind == TvKind::TV2D ? "tv2d" : "tv3d";
}

TvKind tv_kind_from_name(const std::string& name) {
  if (name == "tv2d" || name == "2d") return TvKind::TV2D;
  if (name == "tv3d" || name == "3d") return TvKind::TV3D;
  throw ConfigError("unknown tv kind: " + name);
}

namespace {

struct Dims {
  int frames = 0, rows = 0, cols = 0;
  std::size_t n() const { return static_cast<std::size_t>(frames) * rows * cols; }
  std::size_t idx(int f, int r, int c) const {
    return (static_cast<std::size_t>(f) * rows + r) * cols + c;
  }
};

Dims cube_dims(const VideoCube& x) {
  x.validate();
  return Dims{x.frame_count(), x.rows(), x.cols()};
}

void check_kind(const Dims& d, TvKind kind) {
  if (kind == TvKind::TV3D && d.frames < 2)
    throw ConfigError("3D TV needs at least two frames");
}

// flat copy in (frame, row, col) order
std::vector<double> flatten(const VideoCube& x, const Dims& d) {
  std::vector<double> out;
  out.reserve(d.n());
  for (const auto& f : x.frames) out.insert(out.end(), f.data.begin(), f.data.end());
  return out;
}

VideoCube unflatten(const std::vector<double>& v, const Dims& d) {
  VideoCube x;
  x.frames.assign(static_cast<std::size_t>(d.frames), HiResFrame(d.rows, d.cols));
  for (int f = 0; f < d.frames; ++f) {
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(d.idx(f, 0, 0)),
              v.begin() + static_cast<std::ptrdiff_t>(d.idx(f, 0, 0) + static_cast<std::size_t>(d.rows) * d.cols),
              x.frames[static_cast<std::size_t>(f)].data.begin());
  }
  return x;
}

void gradient_flat(const std::vector<double>& x, const Dims& d, bool temporal,
                   GradientField& g) {
  g.frames = d.frames;
  g.rows = d.rows;
  g.cols = d.cols;
  g.d_row.assign(d.n(), 0.0);
  g.d_col.assign(d.n(), 0.0);
  if (temporal)
    g.d_time.assign(d.n(), 0.0);
  else
    g.d_time.clear();
  for (int f = 0; f < d.frames; ++f) {
    for (int r = 0; r < d.rows; ++r) {
      for (int c = 0; c < d.cols; ++c) {
        const std::size_t i = d.idx(f, r, c);
        if (r + 1 < d.rows) g.d_row[i] = x[d.idx(f, r + 1, c)] - x[i];
        if (c + 1 < d.cols) g.d_col[i] = x[i + 1] - x[i];
        if (temporal && f + 1 < d.frames) g.d_time[i] = x[d.idx(f + 1, r, c)] - x[i];
      }
    }
  }
}

// exact negative adjoint of gradient_flat; trailing-index dual entries
// never contribute
void divergence_flat(const GradientField& g, const Dims& d, std::vector<double>& out) {
  const bool temporal = !g.d_time.empty();
  out.assign(d.n(), 0.0);
  for (int f = 0; f < d.frames; ++f) {
    for (int r = 0; r < d.rows; ++r) {
      for (int c = 0; c < d.cols; ++c) {
        const std::size_t i = d.idx(f, r, c);
        double v = 0.0;
        if (r + 1 < d.rows) v += g.d_row[i];
        if (r >= 1) v -= g.d_row[d.idx(f, r - 1, c)];
        if (c + 1 < d.cols) v += g.d_col[i];
        if (c >= 1) v -= g.d_col[i - 1];
        if (temporal) {
          if (f + 1 < d.frames) v += g.d_time[i];
          if (f >= 1) v -= g.d_time[d.idx(f - 1, r, c)];
        }
        out[i] = v;
      }
    }
  }
}

double tv_flat(const std::vector<double>& x, const Dims& d, bool temporal) {
  GradientField g;
  gradient_flat(x, d, temporal, g);
  double s = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    double q = g.d_row[i] * g.d_row[i] + g.d_col[i] * g.d_col[i];
    if (temporal) q += g.d_time[i] * g.d_time[i];
    s += std::sqrt(q);
  }
  return s;
}

void check_field(const GradientField& g) {
  if (g.frames < 1 || g.rows < 1 || g.cols < 1 ||
      g.d_row.size() != g.points() || g.d_col.size() != g.points() ||
      (g.kind == TvKind::TV3D) != !g.d_time.empty() ||
      (!g.d_time.empty() && g.d_time.size() != g.points())) {
    throw ConfigError("gradient field dimensions inconsistent");
  }
}

}  // namespace

double tv_value(const HiResFrame& x, TvKind kind) {
  x.validate_shape();
  if (kind == TvKind::TV3D) throw ConfigError("3D TV needs at least two frames");
  Dims d{1, x.rows, x.cols};
  return tv_flat(x.data, d, false);
}

double tv_value(const VideoCube& x, TvKind kind) {
  const Dims d = cube_dims(x);
  check_kind(d, kind);
  const auto v = flatten(x, d);
  if (kind == TvKind::TV3D) return tv_flat(v, d, true);
  // per-frame spatial TV
  double s = 0.0;
  for (const auto& f : x.frames) s += tv_value(f, TvKind::TV2D);
  return s;
}

GradientField gradient_op(const HiResFrame& x) {
  x.validate_shape();
  GradientField g;
  g.kind = TvKind::TV2D;
  gradient_flat(x.data, Dims{1, x.rows, x.cols}, false, g);
  return g;
}

GradientField gradient_op(const VideoCube& x, TvKind kind) {
  const Dims d = cube_dims(x);
  check_kind(d, kind);
  GradientField g;
  g.kind = kind;
  gradient_flat(flatten(x, d), d, kind == TvKind::TV3D, g);
  return g;
}

HiResFrame divergence_frame(const GradientField& g) {
  check_field(g);
  if (g.frames != 1) throw ConfigError("divergence_frame needs a single-frame field");
  Dims d{1, g.rows, g.cols};
  HiResFrame out(g.rows, g.cols);
  divergence_flat(g, d, out.data);
  return out;
}

VideoCube divergence_op(const GradientField& g) {
  check_field(g);
  Dims d{g.frames, g.rows, g.cols};
  std::vector<double> flat;
  divergence_flat(g, d, flat);
  return unflatten(flat, d);
}

namespace {

// Fast gradient projection on the dual of
//   min_u 1/2 ||u - v||^2 + lambda TV(u)  (u >= 0 when nonneg)
// p <- P_ball(p + 1/(c*lambda) * grad(P_C(v + lambda * div p)))
// with c = 8 for TV2D, 12 for TV3D (bound on ||grad^T grad||).
std::vector<double> fgp(const std::vector<double>& v, const Dims& d, double lambda,
                        bool temporal, int inner_iters, bool nonneg,
                        GradientField* warm) {
  const double step = 1.0 / ((temporal ? 12.0 : 8.0) * lambda);
  const std::size_t n = d.n();

  GradientField p;
  p.kind = temporal ? TvKind::TV3D : TvKind::TV2D;
  p.frames = d.frames;
  p.rows = d.rows;
  p.cols = d.cols;
  if (warm && warm->frames == d.frames && warm->rows == d.rows &&
      warm->cols == d.cols && warm->d_time.empty() == !temporal) {
    p = *warm;
  } else {
    p.d_row.assign(n, 0.0);
    p.d_col.assign(n, 0.0);
    if (temporal) p.d_time.assign(n, 0.0);
  }
  GradientField q = p;
  GradientField grad;
  std::vector<double> u(n), div(n);
  double t = 1.0;

  for (int it = 0; it < inner_iters; ++it) {
    divergence_flat(q, d, div);
    for (std::size_t i = 0; i < n; ++i) {
      double x = v[i] + lambda * div[i];
      if (nonneg && x < 0.0) x = 0.0;
      u[i] = x;
    }
    gradient_flat(u, d, temporal, grad);
    GradientField p_new = q;
    for (std::size_t i = 0; i < n; ++i) {
      double pr = q.d_row[i] + step * grad.d_row[i];
      double pc = q.d_col[i] + step * grad.d_col[i];
      double pt = temporal ? q.d_time[i] + step * grad.d_time[i] : 0.0;
      const double norm = std::sqrt(pr * pr + pc * pc + pt * pt);
      if (norm > 1.0) {
        pr /= norm;
        pc /= norm;
        if (temporal) pt /= norm;
      }
      p_new.d_row[i] = pr;
      p_new.d_col[i] = pc;
      if (temporal) p_new.d_time[i] = pt;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < n; ++i) {
      q.d_row[i] = p_new.d_row[i] + beta * (p_new.d_row[i] - p.d_row[i]);
      q.d_col[i] = p_new.d_col[i] + beta * (p_new.d_col[i] - p.d_col[i]);
      if (temporal) q.d_time[i] = p_new.d_time[i] + beta * (p_new.d_time[i] - p.d_time[i]);
    }
    p = std::move(p_new);
    t = t_next;
  }

  divergence_flat(p, d, div);
  for (std::size_t i = 0; i < n; ++i) {
    double x = v[i] + lambda * div[i];
    if (nonneg && x < 0.0) x = 0.0;
    u[i] = x;
  }
  if (warm) *warm = std::move(p);
  return u;
}

void check_prox_args(double lambda, int inner_iters) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("tv_prox lambda must be finite and non-negative");
  if (inner_iters < 1) throw ConfigError("tv_prox needs inner_iters >= 1");
}

}  // namespace

HiResFrame tv_prox(const HiResFrame& v, double lambda, int inner_iters) {
  v.validate_shape();
  check_prox_args(lambda, inner_iters);
  if (lambda == 0.0) return v;
  Dims d{1, v.rows, v.cols};
  HiResFrame out(v.rows, v.cols);
  out.data = fgp(v.data, d, lambda, false, inner_iters, false, nullptr);
  return out;
}

VideoCube tv_prox(const VideoCube& v, double lambda, TvKind kind, int inner_iters) {
  const Dims d = cube_dims(v);
  check_kind(d, kind);
  check_prox_args(lambda, inner_iters);
  if (lambda == 0.0) return v;
  if (kind == TvKind::TV2D) {
    // spatial prox decouples per frame
    VideoCube out = v;
    for (auto& f : out.frames) f = tv_prox(f, lambda, inner_iters);
    return out;
  }
  return unflatten(fgp(flatten(v, d), d, lambda, true, inner_iters, false, nullptr), d);
}

namespace detail {

VideoCube tv_prox_constrained(const VideoCube& v, double lambda, TvKind kind,
                              int inner_iters, bool nonneg, TvProxState& state) {
  const Dims d = cube_dims(v);
  check_kind(d, kind);
  check_prox_args(lambda, inner_iters);
  if (lambda == 0.0) {
    VideoCube out = v;
    if (nonneg)
      for (auto& f : out.frames)
        for (double& x : f.data) x = std::max(0.0, x);
    return out;
  }
  const bool temporal = kind == TvKind::TV3D;
  auto out = unflatten(fgp(flatten(v, d), d, lambda, temporal, inner_iters, nonneg,
                           &state.p),
                       d);
  state.initialized = true;
  return out;
}

}  // namespace detail

}  // namespace fpacs
