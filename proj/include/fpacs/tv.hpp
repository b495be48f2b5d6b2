#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fpacs/frame.hpp"

namespace fpacs {

// TV3D adds a temporal forward difference and needs at least two frames.
enum class TvKind { TV2D, TV3D };

std::string tv_kind_name(TvKind kind);
TvKind tv_kind_from_name(const std::string& name);

// Per-point forward differences, replicate boundary (zero at the trailing
// index of each axis). d_time stays empty for TV2D.
struct GradientField {
  TvKind kind = TvKind::TV2D;
  int frames = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> d_row, d_col, d_time;

  std::size_t points() const {
    return static_cast<std::size_t>(frames) * rows * cols;
  }
};

// Isotropic total variation: sum_i sqrt(sum_axes (D_axis x)_i^2).
double tv_value(const HiResFrame& x, TvKind kind = TvKind::TV2D);
double tv_value(const VideoCube& x, TvKind kind);

GradientField gradient_op(const HiResFrame& x);
GradientField gradient_op(const VideoCube& x, TvKind kind);

// Exact negative adjoint of gradient_op:
// <gradient_op(x), g> = -<x, divergence_op(g)> for every g.
HiResFrame divergence_frame(const GradientField& g);
VideoCube divergence_op(const GradientField& g);

// Approximate prox of lambda * TV at v via fast gradient projection on
// the dual (lambda = 0 returns v unchanged). Unconstrained; the solver
// uses the stateful variant below to clamp and to warm-start the dual.
HiResFrame tv_prox(const HiResFrame& v, double lambda, int inner_iters);
VideoCube tv_prox(const VideoCube& v, double lambda, TvKind kind, int inner_iters);

namespace detail {

// Dual variable carried across outer solver iterations.
struct TvProxState {
  GradientField p;
  bool initialized = false;
};

VideoCube tv_prox_constrained(const VideoCube& v, double lambda, TvKind kind,
                              int inner_iters, bool nonneg, TvProxState& state);

}  // namespace detail

}  // namespace fpacs
