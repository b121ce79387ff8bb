#include "mfd/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mfd/kernels.hpp"

namespace mfd {

namespace {

double finish_report(SolveReport& rep, const std::chrono::steady_clock::time_point& t0) {
  rep.wall_seconds =
      std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t0)
          .count();
  const int n = rep.iterations;
  if (n > 0 && rep.residual_history.size() > static_cast<std::size_t>(n) &&
      rep.residual_history.front() > 0.0 && rep.residual_history[n] > 0.0) {
    rep.rho = std::exp(std::log(rep.residual_history[n] / rep.residual_history.front()) / n);
  }
  return rep.wall_seconds;
}

std::optional<double> lanczos_condition(const std::vector<double>& alpha,
                                        const std::vector<double>& beta) {
  // T has diag 1/alpha_k + beta_{k-1}/alpha_{k-1} and offdiag sqrt(beta_k)/alpha_k.
  const std::size_t k = alpha.size();
  if (k < 2) return std::nullopt;
  std::vector<double> d(k), e(k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    d[i] = 1.0 / alpha[i];
    if (i > 0) d[i] += beta[i - 1] / alpha[i - 1];
    if (i + 1 < k) e[i] = std::sqrt(std::max(0.0, beta[i])) / alpha[i];
  }
  const std::vector<double> eigs = tridiagonal_eigenvalues(std::move(d), std::move(e));
  if (eigs.front() <= 0.0) return std::nullopt;
  return eigs.back() / eigs.front();
}

std::pair<std::vector<double>, SolveReport> krylov_solve(const SparseOperator& a,
                                                         const Preconditioner* precond,
                                                         const std::vector<double>& b,
                                                         const StoppingRule& stop,
                                                         int lanczos_extra,
                                                         const IterationObserver& observer) {
  if (static_cast<int>(b.size()) != a.n) throw std::invalid_argument("cg: rhs size mismatch");
  if (stop.relative_tolerance <= 0.0) throw std::invalid_argument("cg: tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const int n = a.n;

  SolveReport rep;
  std::vector<double> x(n, 0.0);
  std::vector<double> r = b;
  const double nb = kernels::nrm2(b.data(), n);
  rep.residual_history.push_back(nb);
  if (nb == 0.0) {
    rep.converged = true;
    finish_report(rep, t0);
    return {x, rep};
  }
  const double target = stop.relative_tolerance * nb;

  std::vector<double> z = precond ? (*precond)(r) : r;
  std::vector<double> p = z;
  double rz = kernels::dot(r.data(), z.data(), n);
  std::vector<double> alpha_hist, beta_hist;

  int converged_at = -1;
  const int hard_cap = stop.max_iterations + std::max(0, lanczos_extra);
  std::vector<double> ap(n);
  for (int it = 1; it <= hard_cap; ++it) {
    a.multiply(p.data(), ap.data());
    const double pap = kernels::dot(p.data(), ap.data(), n);
    if (pap <= 0.0 || rz == 0.0) break;  // numerical floor past convergence
    const double alpha = rz / pap;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, ap.data(), r.data(), n);
    const double rn = kernels::nrm2(r.data(), n);

    z = precond ? (*precond)(r) : r;
    const double rz_new = kernels::dot(r.data(), z.data(), n);
    const double beta = rz_new / rz;
    rz = rz_new;
    kernels::xpby(z.data(), beta, p.data(), n);

    alpha_hist.push_back(alpha);
    beta_hist.push_back(beta);

    if (converged_at < 0) {
      rep.residual_history.push_back(rn);
      if (observer) observer(it, x);
      if (rn <= target) converged_at = it;
      if (converged_at < 0 && it >= stop.max_iterations) break;
    }
    if (converged_at > 0 && it >= converged_at + lanczos_extra) break;
  }

  if (converged_at > 0) {
    rep.converged = true;
    rep.iterations = converged_at;
  } else {
    rep.iterations = static_cast<int>(rep.residual_history.size()) - 1;
  }
  if (!beta_hist.empty()) beta_hist.pop_back();  // beta has one fewer entry than alpha in T
  rep.cond_estimate = lanczos_condition(alpha_hist, beta_hist);
  finish_report(rep, t0);
  return {x, rep};
}

}  // namespace

std::pair<std::vector<double>, SolveReport> cg(const SparseOperator& a, const std::vector<double>& b,
                                               const StoppingRule& stop, int lanczos_extra,
                                               const IterationObserver& observer) {
  return krylov_solve(a, nullptr, b, stop, lanczos_extra, observer);
}

std::pair<std::vector<double>, SolveReport> pcg(const SparseOperator& a,
                                                const Preconditioner& apply_b_inverse,
                                                const std::vector<double>& b,
                                                const StoppingRule& stop, int lanczos_extra,
                                                const IterationObserver& observer) {
  if (!apply_b_inverse) throw std::invalid_argument("pcg: missing preconditioner");
  return krylov_solve(a, &apply_b_inverse, b, stop, lanczos_extra, observer);
}

std::pair<std::vector<double>, SolveReport> stationary_two_level(const SparseOperator& a,
                                                                 const TwoLevelPreconditioner& tg,
                                                                 const std::vector<double>& b,
                                                                 const StoppingRule& stop) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  std::vector<double> x(a.n, 0.0);
  const double nb = kernels::nrm2(b.data(), a.n);
  rep.residual_history.push_back(nb);
  if (nb == 0.0) {
    rep.converged = true;
    finish_report(rep, t0);
    return {x, rep};
  }
  const double target = stop.relative_tolerance * nb;
  int rising = 0;
  std::vector<double> r(a.n);
  for (int it = 1; it <= stop.max_iterations; ++it) {
    tg.cycle(b, x);
    a.multiply(x.data(), r.data());
    for (int i = 0; i < a.n; ++i) r[i] = b[i] - r[i];
    const double rn = kernels::nrm2(r.data(), a.n);
    rep.residual_history.push_back(rn);
    rep.iterations = it;
    if (rn <= target) {
      rep.converged = true;
      break;
    }
    rising = rn > rep.residual_history[it - 1] ? rising + 1 : 0;
    if (rising >= 10) {
      rep.diverged = true;
      break;
    }
  }
  finish_report(rep, t0);
  return {x, rep};
}

std::vector<double> condition_rate(const std::vector<double>& cond_per_level, double base) {
  if (cond_per_level.size() < 2)
    throw std::invalid_argument("condition_rate: need at least two levels");
  if (base <= 0.0 || base == 1.0) throw std::invalid_argument("condition_rate: bad base");
  for (double c : cond_per_level)
    if (!(c > 0.0)) throw std::invalid_argument("condition_rate: values must be positive");
  std::vector<double> rates(cond_per_level.size() - 1);
  for (std::size_t i = 0; i + 1 < cond_per_level.size(); ++i)
    rates[i] = std::log(cond_per_level[i + 1] / cond_per_level[i]) / std::log(base);
  return rates;
}

double estimate_condition(const SparseOperator& a, const std::vector<double>& b, int dense_cutoff) {
  if (a.n < dense_cutoff) {
    const std::vector<double> eigs = symmetric_eigenvalues(to_dense(a));
    if (eigs.front() <= 0.0) throw std::runtime_error("estimate_condition: operator not SPD");
    return eigs.back() / eigs.front();
  }
  StoppingRule stop;
  stop.relative_tolerance = 1e-9;
  stop.max_iterations = 4 * a.n;
  const auto [x, rep] = cg(a, b, stop, /*lanczos_extra=*/30);
  (void)x;
  if (!rep.cond_estimate) throw std::runtime_error("estimate_condition: Lanczos estimate unavailable");
  return *rep.cond_estimate;
}

}  // namespace mfd
