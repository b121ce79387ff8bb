#pragma once

#include <memory>
#include <vector>

#include "mfd/dense.hpp"
#include "mfd/discretization.hpp"
#include "mfd/mesh.hpp"
#include "mfd/sparse.hpp"

namespace mfd {

/// Coarse-to-fine transfer: identity at coarse-vertex images, two-point
/// average at edge midpoints, n_E-point average at cell points. Rows over
/// fine free dofs, columns over coarse free dofs (boundary stencil entries
/// dropped).
struct Prolongation {
  SparseOperator matrix;     // fine_free x coarse_free
  SparseOperator transposed; // coarse_free x fine_free
  int n_fine = 0;
  int n_coarse = 0;

  std::vector<double> apply(const std::vector<double>& coarse) const;
  std::vector<double> apply_transpose(const std::vector<double>& fine) const;
};

Prolongation build_prolongation(const MeshHierarchy& hier, const DofMap& coarse_dofs,
                                const DofMap& fine_dofs);

/// Point sampling at coarse-vertex images (the interpolation onto the
/// embedded coarse space).
std::vector<double> interpolate_to_coarse(const std::vector<double>& fine_values,
                                          const MeshHierarchy& hier, const DofMap& coarse_dofs,
                                          const DofMap& fine_dofs);

enum class SmootherKind { GaussSeidelForward, DampedJacobi, Sor };

struct SmootherConfig {
  SmootherKind kind = SmootherKind::GaussSeidelForward;
  int sweeps = 1;
  double jacobi_damping = 0.5;
  double sor_omega = 1.5;  // in (0, 2)

  void check() const;
};

/// nu sweeps of x <- x + R (rhs - A x); transposed applies R^T (the reverse
/// sweep for Gauss-Seidel/SOR). Throws on a zero diagonal entry.
void smooth(const SparseOperator& a, const std::vector<double>& rhs, std::vector<double>& x,
            const SmootherConfig& cfg, bool transposed);

enum class CoarseOperatorKind { Galerkin, SparsifiedEdge, UnitEdge };

/// Galerkin: P^T A P with A the fine operator being preconditioned.
/// SparsifiedEdge: coarse-edge form with weights a_{e,H} = mean of the two
/// fine half-edge weights (pass weights at the scale of the solved system).
/// UnitEdge: coarse-edge form with unit weights.
SparseOperator build_coarse(CoarseOperatorKind kind, const EdgeWeights& fine_weights,
                            const Prolongation& prolongation, const MeshHierarchy& hier,
                            const DofMap& coarse_dofs, const SparseOperator& fine_operator);

/// Direct coarse solver: reverse Cuthill-McKee reordering and banded
/// Cholesky. Throws if the matrix is not positive definite.
class CoarseSolver {
 public:
  explicit CoarseSolver(const SparseOperator& a);
  std::vector<double> solve(const std::vector<double>& rhs) const;
  int size() const { return n_; }

 private:
  int n_ = 0;
  std::vector<int> perm_;      // position -> original index
  std::vector<int> inv_perm_;  // original index -> position
  std::unique_ptr<BandedCholesky> chol_;
};

/// Symmetrized two-level cycle: nu reverse sweeps, coarse correction through
/// the prolongation with a direct solve, nu forward sweeps. Applying the
/// cycle to a residual from a zero start is the preconditioner action.
class TwoLevelPreconditioner {
 public:
  TwoLevelPreconditioner(const SparseOperator& fine_system, Prolongation prolongation,
                         SparseOperator coarse_operator, SmootherConfig smoother);

  /// One cycle x <- TG(x) for the system fine*x = rhs.
  void cycle(const std::vector<double>& rhs, std::vector<double>& x) const;
  /// Preconditioner action: one cycle from a zero initial guess.
  std::vector<double> apply(const std::vector<double>& residual) const;

  const SparseOperator& fine() const { return *fine_; }
  const SparseOperator& coarse_operator() const { return coarse_op_; }
  const Prolongation& prolongation() const { return prolongation_; }
  const SmootherConfig& smoother() const { return smoother_; }

 private:
  const SparseOperator* fine_;
  Prolongation prolongation_;
  SparseOperator coarse_op_;
  CoarseSolver coarse_solver_;
  SmootherConfig smoother_;
};

struct SmootherAssumptionReport {
  // generalized eigenvalue extremes of (D_R, D) with D_R = R^{-1} + R^{-T} - A
  double dr_vs_d_min = 0.0;
  double dr_vs_d_max = 0.0;
  // generalized eigenvalue extremes of (Rtilde^{-1}, D)
  double rtinv_vs_d_min = 0.0;
  double rtinv_vs_d_max = 0.0;
  // max |D_R - c D| for the exact Gauss-Seidel/SOR relation D_R = ((2-w)/w) D
  double exact_relation_dev = 0.0;
  double exact_relation_factor = 0.0;
};

/// Dense verification of the smoother equivalences (desk-scale systems, one
/// sweep of the configured smoother).
SmootherAssumptionReport verify_smoother_assumptions(const SparseOperator& a,
                                                     const SmootherConfig& cfg);

/// ||E||_A of the cycle's error propagator by power iteration in the A-inner
/// product (exact for the A-self-adjoint Galerkin cycle).
double contraction_norm_estimate(const TwoLevelPreconditioner& tg, int iterations = 100);

/// ||I - Rtilde A||_A for the symmetrized smoother alone, by power iteration.
double smoother_contraction_estimate(const SparseOperator& a, const SmootherConfig& cfg,
                                     int iterations = 150);

}  // namespace mfd
