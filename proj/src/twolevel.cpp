#include "mfd/twolevel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfd/kernels.hpp"

namespace mfd {

std::vector<double> Prolongation::apply(const std::vector<double>& coarse) const {
  if (static_cast<int>(coarse.size()) != n_coarse)
    throw std::invalid_argument("Prolongation::apply: size mismatch");
  std::vector<double> fine(n_fine, 0.0);
  if (n_fine > 0 && n_coarse > 0)
    kernels::spmv(n_fine, matrix.row_ptr.data(), matrix.col_idx.data(), matrix.values.data(),
                  coarse.data(), fine.data());
  return fine;
}

std::vector<double> Prolongation::apply_transpose(const std::vector<double>& fine) const {
  if (static_cast<int>(fine.size()) != n_fine)
    throw std::invalid_argument("Prolongation::apply_transpose: size mismatch");
  std::vector<double> coarse(n_coarse, 0.0);
  if (n_fine > 0 && n_coarse > 0)
    kernels::spmv(n_coarse, transposed.row_ptr.data(), transposed.col_idx.data(),
                  transposed.values.data(), fine.data(), coarse.data());
  return coarse;
}

Prolongation build_prolongation(const MeshHierarchy& hier, const DofMap& coarse_dofs,
                                const DofMap& fine_dofs) {
  const PolygonalMesh& fine = hier.fine;
  const PolygonalMesh& coarse = hier.coarse;

  // Inverse parent maps for fine vertices.
  std::vector<int> parent_vertex(fine.n_vertices(), -1);
  std::vector<int> parent_edge(fine.n_vertices(), -1);
  std::vector<int> parent_cell(fine.n_vertices(), -1);
  for (int v = 0; v < coarse.n_vertices(); ++v) parent_vertex[hier.coarse_vertex_image[v]] = v;
  for (int e = 0; e < coarse.n_edges(); ++e) parent_edge[hier.midpoint_of_coarse_edge[e]] = e;
  for (int c = 0; c < coarse.n_cells(); ++c) parent_cell[hier.center_of_coarse_cell[c]] = c;

  std::vector<Triplet> trips;
  for (int fv = 0; fv < fine.n_vertices(); ++fv) {
    const int row = fine_dofs.vertex_to_dof[fv];
    if (row < 0) continue;
    switch (fine.vertices[fv].kind) {
      case VertexKind::CoarseVertex: {
        const int cv = parent_vertex[fv];
        const int col = coarse_dofs.vertex_to_dof[cv];
        if (col >= 0) trips.push_back({row, col, 1.0});
        break;
      }
      case VertexKind::EdgeMidpoint: {
        const Edge& e = coarse.edges[parent_edge[fv]];
        for (int cv : {e.v0, e.v1}) {
          const int col = coarse_dofs.vertex_to_dof[cv];
          if (col >= 0) trips.push_back({row, col, 0.5});
        }
        break;
      }
      case VertexKind::CellCenter: {
        const Cell& c = coarse.cells[parent_cell[fv]];
        const double w = 1.0 / static_cast<double>(c.vertex_loop.size());
        for (int cv : c.vertex_loop) {
          const int col = coarse_dofs.vertex_to_dof[cv];
          if (col >= 0) trips.push_back({row, col, w});
        }
        break;
      }
    }
  }

  Prolongation p;
  p.n_fine = fine_dofs.n_free();
  p.n_coarse = coarse_dofs.n_free();
  p.matrix = operator_from_triplets(p.n_fine, std::move(trips));
  p.transposed = sparse_transpose(p.matrix, p.n_coarse);
  return p;
}

std::vector<double> interpolate_to_coarse(const std::vector<double>& fine_values,
                                          const MeshHierarchy& hier, const DofMap& coarse_dofs,
                                          const DofMap& fine_dofs) {
  if (static_cast<int>(fine_values.size()) != fine_dofs.n_free())
    throw std::invalid_argument("interpolate_to_coarse: size mismatch");
  std::vector<double> coarse(coarse_dofs.n_free(), 0.0);
  for (int cd = 0; cd < coarse_dofs.n_free(); ++cd) {
    const int cv = coarse_dofs.free_dofs[cd];
    const int fv = hier.coarse_vertex_image[cv];
    const int fd = fine_dofs.vertex_to_dof[fv];
    if (fd >= 0) coarse[cd] = fine_values[fd];
  }
  return coarse;
}

void SmootherConfig::check() const {
  if (sweeps < 1) throw std::invalid_argument("SmootherConfig: sweeps must be >= 1");
  if (kind == SmootherKind::Sor && (sor_omega <= 0.0 || sor_omega >= 2.0))
    throw std::invalid_argument("SmootherConfig: SOR omega must lie in (0, 2)");
  if (kind == SmootherKind::DampedJacobi && jacobi_damping <= 0.0)
    throw std::invalid_argument("SmootherConfig: Jacobi damping must be positive");
}

namespace {

void sweep_triangular(const SparseOperator& a, const std::vector<double>& rhs,
                      std::vector<double>& x, double omega, bool backward) {
  const int n = a.n;
  for (int ii = 0; ii < n; ++ii) {
    const int i = backward ? n - 1 - ii : ii;
    double s = rhs[i];
    double diag = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col_idx[k];
      if (j == i)
        diag = a.values[k];
      else
        s -= a.values[k] * x[j];
    }
    if (diag == 0.0) throw std::runtime_error("smooth: zero diagonal entry");
    x[i] = (1.0 - omega) * x[i] + omega * s / diag;
  }
}

}  // namespace

void smooth(const SparseOperator& a, const std::vector<double>& rhs, std::vector<double>& x,
            const SmootherConfig& cfg, bool transposed) {
  cfg.check();
  if (static_cast<int>(rhs.size()) != a.n || static_cast<int>(x.size()) != a.n)
    throw std::invalid_argument("smooth: size mismatch");
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    switch (cfg.kind) {
      case SmootherKind::GaussSeidelForward:
        sweep_triangular(a, rhs, x, 1.0, transposed);
        break;
      case SmootherKind::Sor:
        sweep_triangular(a, rhs, x, cfg.sor_omega, transposed);
        break;
      case SmootherKind::DampedJacobi: {
        std::vector<double> r = a.multiply(x);
        for (int i = 0; i < a.n; ++i) r[i] = rhs[i] - r[i];
        const std::vector<double> d = a.diagonal();
        for (int i = 0; i < a.n; ++i) {
          if (d[i] == 0.0) throw std::runtime_error("smooth: zero diagonal entry");
          x[i] += cfg.jacobi_damping * r[i] / d[i];
        }
        break;
      }
    }
  }
}

SparseOperator build_coarse(CoarseOperatorKind kind, const EdgeWeights& fine_weights,
                            const Prolongation& prolongation, const MeshHierarchy& hier,
                            const DofMap& coarse_dofs, const SparseOperator& fine_operator) {
  if (kind == CoarseOperatorKind::Galerkin) {
    const SparseOperator ap = sparse_matmul(fine_operator, prolongation.matrix);
    return sparse_matmul(prolongation.transposed, ap);
  }
  std::vector<Triplet> trips;
  for (int e = 0; e < hier.coarse.n_edges(); ++e) {
    double w = 1.0;
    if (kind == CoarseOperatorKind::SparsifiedEdge) {
      const auto [h0, h1] = hier.halves_of_coarse_edge[e];
      w = 0.5 * (fine_weights.a_e[h0] + fine_weights.a_e[h1]);
      if (w <= 0.0) throw std::runtime_error("build_coarse: nonpositive averaged edge weight");
    }
    const Edge& edge = hier.coarse.edges[e];
    const int da = coarse_dofs.vertex_to_dof[edge.v0];
    const int db = coarse_dofs.vertex_to_dof[edge.v1];
    if (da >= 0) trips.push_back({da, da, w});
    if (db >= 0) trips.push_back({db, db, w});
    if (da >= 0 && db >= 0) {
      trips.push_back({da, db, -w});
      trips.push_back({db, da, -w});
    }
  }
  return operator_from_triplets(coarse_dofs.n_free(), std::move(trips));
}

CoarseSolver::CoarseSolver(const SparseOperator& a) : n_(a.n) {
  perm_ = reverse_cuthill_mckee(a);
  inv_perm_.assign(n_, 0);
  for (int k = 0; k < n_; ++k) inv_perm_[perm_[k]] = k;
  int bw = 0;
  for (int i = 0; i < n_; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      bw = std::max(bw, std::abs(inv_perm_[i] - inv_perm_[a.col_idx[k]]));
  chol_ = std::make_unique<BandedCholesky>(n_, bw);
  for (int i = 0; i < n_; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int pi = inv_perm_[i];
      const int pj = inv_perm_[a.col_idx[k]];
      if (pj <= pi) chol_->set(pi, pj, a.values[k]);
    }
  chol_->factor();
}

std::vector<double> CoarseSolver::solve(const std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("CoarseSolver: rhs size mismatch");
  std::vector<double> pr(n_);
  for (int k = 0; k < n_; ++k) pr[k] = rhs[perm_[k]];
  const std::vector<double> px = chol_->solve(pr);
  std::vector<double> x(n_);
  for (int k = 0; k < n_; ++k) x[perm_[k]] = px[k];
  return x;
}

TwoLevelPreconditioner::TwoLevelPreconditioner(const SparseOperator& fine_system,
                                               Prolongation prolongation,
                                               SparseOperator coarse_operator,
                                               SmootherConfig smoother)
    : fine_(&fine_system),
      prolongation_(std::move(prolongation)),
      coarse_op_(std::move(coarse_operator)),
      coarse_solver_(coarse_op_),
      smoother_(smoother) {
  smoother_.check();
  if (prolongation_.n_fine != fine_->n || prolongation_.n_coarse != coarse_op_.n)
    throw std::invalid_argument("TwoLevelPreconditioner: inconsistent operator sizes");
}

void TwoLevelPreconditioner::cycle(const std::vector<double>& rhs, std::vector<double>& x) const {
  // pre-smoothing with the transposed smoother
  smooth(*fine_, rhs, x, smoother_, /*transposed=*/true);
  // coarse-grid correction
  std::vector<double> r = fine_->multiply(x);
  for (int i = 0; i < fine_->n; ++i) r[i] = rhs[i] - r[i];
  const std::vector<double> rc = prolongation_.apply_transpose(r);
  const std::vector<double> ec = coarse_solver_.solve(rc);
  const std::vector<double> ef = prolongation_.apply(ec);
  kernels::axpy(1.0, ef.data(), x.data(), x.size());
  // post-smoothing
  smooth(*fine_, rhs, x, smoother_, /*transposed=*/false);
}

std::vector<double> TwoLevelPreconditioner::apply(const std::vector<double>& residual) const {
  std::vector<double> x(fine_->n, 0.0);
  cycle(residual, x);
  return x;
}

namespace {

// Dense single-sweep smoother inverse R^{-1}: D/omega + L for forward
// GS/SOR sweeps, D/theta for damped Jacobi.
DenseMatrix dense_smoother_inverse(const SparseOperator& a, const SmootherConfig& cfg) {
  const int n = a.n;
  DenseMatrix rinv(n, n);
  const std::vector<double> d = a.diagonal();
  const double omega = cfg.kind == SmootherKind::Sor ? cfg.sor_omega
                       : cfg.kind == SmootherKind::GaussSeidelForward ? 1.0
                                                                      : 0.0;
  if (cfg.kind == SmootherKind::DampedJacobi) {
    for (int i = 0; i < n; ++i) rinv(i, i) = d[i] / cfg.jacobi_damping;
    return rinv;
  }
  for (int i = 0; i < n; ++i) {
    rinv(i, i) = d[i] / omega;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col_idx[k] < i) rinv(i, a.col_idx[k]) = a.values[k];
  }
  return rinv;
}

DenseMatrix dense_inverse(DenseMatrix m) {
  // general inverse via Gauss-Jordan with partial pivoting
  const int n = m.rows;
  DenseMatrix inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0) throw std::runtime_error("dense_inverse: singular");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const double p = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace

SmootherAssumptionReport verify_smoother_assumptions(const SparseOperator& a,
                                                     const SmootherConfig& cfg) {
  SmootherAssumptionReport rep;
  const int n = a.n;
  const DenseMatrix ad = to_dense(a);
  const DenseMatrix rinv = dense_smoother_inverse(a, cfg);
  // D_R = R^{-1} + R^{-T} - A
  DenseMatrix dr(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dr(i, j) = rinv(i, j) + rinv(j, i) - ad(i, j);
  DenseMatrix dmat(n, n);
  const std::vector<double> diag = a.diagonal();
  for (int i = 0; i < n; ++i) dmat(i, i) = diag[i];

  {
    const std::vector<double> eigs = generalized_eigenvalues(dr, dmat);
    rep.dr_vs_d_min = eigs.front();
    rep.dr_vs_d_max = eigs.back();
  }

  // exact relation D_R = ((2 - omega)/omega) D for GS (omega = 1) and SOR
  if (cfg.kind != SmootherKind::DampedJacobi) {
    const double omega = cfg.kind == SmootherKind::Sor ? cfg.sor_omega : 1.0;
    rep.exact_relation_factor = (2.0 - omega) / omega;
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dev = std::max(dev, std::abs(dr(i, j) - (i == j ? rep.exact_relation_factor * diag[i] : 0.0)));
    rep.exact_relation_dev = dev;
  }

  // Rtilde = R D_R R^T with R = rinv^{-1}; Rtilde^{-1} = R^{-T} D_R^{-1} R^{-1}
  const DenseMatrix drinv = dense_inverse(dr);
  const DenseMatrix rtinv = matmul(transpose(rinv), matmul(drinv, rinv));
  {
    const std::vector<double> eigs = generalized_eigenvalues(rtinv, dmat);
    rep.rtinv_vs_d_min = eigs.front();
    rep.rtinv_vs_d_max = eigs.back();
  }
  return rep;
}

namespace {

double a_norm(const SparseOperator& a, const std::vector<double>& x) {
  const std::vector<double> ax = a.multiply(x);
  return std::sqrt(std::max(0.0, kernels::dot(x.data(), ax.data(), x.size())));
}

std::vector<double> deterministic_start(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(0.7 * (i + 1)) + 0.3 * std::cos(2.3 * (i + 1));
  return x;
}

}  // namespace

double contraction_norm_estimate(const TwoLevelPreconditioner& tg, int iterations) {
  const SparseOperator& a = tg.fine();
  std::vector<double> z = deterministic_start(a.n);
  double ratio = 0.0;
  double zn = a_norm(a, z);
  if (zn == 0.0) return 0.0;
  for (double& v : z) v /= zn;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> w = z;
    const std::vector<double> zero(a.n, 0.0);
    tg.cycle(zero, w);  // w = E z
    const double wn = a_norm(a, w);
    ratio = wn;  // ||E z||_A with ||z||_A = 1
    if (wn == 0.0) return 0.0;
    for (double& v : w) v /= wn;
    z = std::move(w);
  }
  return ratio;
}

double smoother_contraction_estimate(const SparseOperator& a, const SmootherConfig& cfg,
                                     int iterations) {
  // I - Rtilde A = (I - R^T A)(I - R A): forward sweep then reverse sweep
  // with zero right-hand side
  std::vector<double> z = deterministic_start(a.n);
  double zn = a_norm(a, z);
  for (double& v : z) v /= zn;
  const std::vector<double> zero(a.n, 0.0);
  double ratio = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> w = z;
    smooth(a, zero, w, cfg, false);
    smooth(a, zero, w, cfg, true);
    const double wn = a_norm(a, w);
    ratio = wn;
    if (wn == 0.0) return 0.0;
    for (double& v : w) v /= wn;
    z = std::move(w);
  }
  return ratio;
}

}  // namespace mfd
