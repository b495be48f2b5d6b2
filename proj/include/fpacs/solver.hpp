#pragma once

#include <vector>

#include "fpacs/forward_model.hpp"
#include "fpacs/frame.hpp"
#include "fpacs/tv.hpp"

namespace fpacs {

struct SolverConfig {
  double lambda = 1e-3;      // TV weight
  int max_iters = 500;
  int inner_prox_iters = 15;
  double tol = 1e-6;         // relative objective change; 0 disables
  double step = 0.0;         // explicit 1/L; 0 = auto via power iteration
  bool nonneg = true;

  void validate() const;
};

struct ReconResult {
  VideoCube estimate;
  // per accepted iteration: 1/2||Ax-y||^2 + lambda*TV(x) and its parts
  std::vector<double> objective_trace;
  std::vector<double> data_trace;
  std::vector<double> tv_trace;
  int iterations_run = 0;
  bool converged = false;
};

// Largest eigenvalue of A^T A (A = stacked masked-averaging operator),
// power iteration from a fixed seeded start, 1.05 safety factor.
double lipschitz_estimate(const StackedSystem& system);

// Monotone FISTA: gradient step on the data term, TV prox step
// (warm-started dual, nonneg clamp inside when enabled), momentum with
// restart to the best iterate so the objective trace never increases.
ReconResult solve(const StackedSystem& system, TvKind kind, const SolverConfig& cfg);

// Conjugate gradients on the normal equations A^T A x = A^T y from a
// zero start (hence the minimum-norm solution on singular systems),
// 200 iterations cap. Single-frame systems only.
HiResFrame least_squares_baseline(const StackedSystem& system);

// objective_trace as CSV rows: iteration, objective, data_term, tv_term.
void save_trace_csv(const ReconResult& result, const std::string& path);

}  // namespace fpacs
