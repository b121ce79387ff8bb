#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mfd/sparse.hpp"
#include "mfd/twolevel.hpp"

namespace mfd {

struct StoppingRule {
  double relative_tolerance = 1e-9;  // ||r_k|| <= tol ||b||, Euclidean norms
  int max_iterations = 2000;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // ||r_0||, ..., ||r_n||
  bool converged = false;
  bool diverged = false;
  double rho = 0.0;  // exp((1/n) log(||r_n|| / ||r_0||))
  std::optional<double> cond_estimate;
  double wall_seconds = 0.0;
};

using Preconditioner = std::function<std::vector<double>(const std::vector<double>&)>;
using IterationObserver = std::function<void(int iteration, const std::vector<double>& x)>;

/// Conjugate gradients from a zero start. `lanczos_extra` extends the run
/// past convergence to sharpen the tridiagonal condition-number estimate.
std::pair<std::vector<double>, SolveReport> cg(const SparseOperator& a,
                                               const std::vector<double>& b,
                                               const StoppingRule& stop, int lanczos_extra = 0,
                                               const IterationObserver& observer = {});

std::pair<std::vector<double>, SolveReport> pcg(const SparseOperator& a,
                                                const Preconditioner& apply_b_inverse,
                                                const std::vector<double>& b,
                                                const StoppingRule& stop, int lanczos_extra = 0,
                                                const IterationObserver& observer = {});

/// Stationary iteration of the two-level cycle from a zero start. Flags
/// divergence after 10 consecutive residual increases.
std::pair<std::vector<double>, SolveReport> stationary_two_level(const SparseOperator& a,
                                                                 const TwoLevelPreconditioner& tg,
                                                                 const std::vector<double>& b,
                                                                 const StoppingRule& stop);

/// Per-level growth rates log_base(c[i+1] / c[i]); rejects nonpositive input.
std::vector<double> condition_rate(const std::vector<double>& cond_per_level, double base = 2.0);

/// Condition number of an SPD operator: dense eigenvalue extremes below
/// `dense_cutoff` unknowns, otherwise the Lanczos tridiagonal estimate from a
/// converged CG run continued 30 iterations past the stopping point.
double estimate_condition(const SparseOperator& a, const std::vector<double>& b,
                          int dense_cutoff = 500);

}  // namespace mfd
