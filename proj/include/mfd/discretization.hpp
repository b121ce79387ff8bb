#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mfd/dense.hpp"
#include "mfd/mesh.hpp"
#include "mfd/sparse.hpp"

namespace mfd {

/// Piecewise-constant diffusion coefficient, one positive value per cell.
struct Coefficient {
  std::vector<double> per_cell;
  double kappa_star = 0.0;  // lower bound over cells
  double kappa_sup = 0.0;   // upper bound over cells

  static Coefficient constant(const PolygonalMesh& mesh, double value);
  static Coefficient from_values(std::vector<double> values);
};

/// Free (interior) versus constrained (boundary) vertex partition for
/// homogeneous Dirichlet conditions.
struct DofMap {
  std::vector<int> free_dofs;         // vertex ids, ascending
  std::vector<int> constrained_dofs;  // vertex ids, ascending
  std::vector<int> vertex_to_dof;     // -1 for constrained vertices

  int n_free() const { return static_cast<int>(free_dofs.size()); }

  static DofMap build(const PolygonalMesh& mesh);
  /// Every vertex free; used for whole-space tests on meshes that are not
  /// partitions of the unit square.
  static DofMap all_free(const PolygonalMesh& mesh);
};

/// Local matrices of one cell: A_E = (1/(kappa |E|)) R R^T + s P with
/// P = I - N (N^T N)^{-1} N^T and s = trace((1/(kappa |E|)) R R^T).
struct LocalStiffness {
  int cell_id = -1;
  DenseMatrix matrix;  // n x n, symmetric PSD, kernel = constants
  DenseMatrix N_mat;   // n x 3: (1, x_i - xbar, y_i - ybar), mass-center based
  DenseMatrix R_mat;   // n x 3: (kappa/2) cyclic coordinate differences
  DenseMatrix P_mat;   // n x n projector
  double scaling = 0.0;
};

DenseMatrix build_N(const PolygonalMesh& mesh, const Cell& cell);
DenseMatrix build_R(const PolygonalMesh& mesh, const Cell& cell, double kappa);
LocalStiffness local_stiffness(const PolygonalMesh& mesh, const Cell& cell, double kappa);

/// Global stiffness over free dofs; boundary rows/columns eliminated.
SparseOperator assemble_mfd(const PolygonalMesh& mesh, const Coefficient& kappa, const DofMap& dofs);

/// Per-edge weights a_e = sum over cells containing e of kappa_E |E| / h_e^2.
struct EdgeWeights {
  std::vector<double> a_e;  // indexed by edge id, all edges
};

/// Weighted edge-difference form, spectrally equivalent to the stiffness
/// operator; returns the eliminated operator and the full edge weights.
std::pair<SparseOperator, EdgeWeights> assemble_edge_form(const PolygonalMesh& mesh,
                                                          const Coefficient& kappa,
                                                          const DofMap& dofs);

/// Edge-pair couplings of the stiffness operator itself: for each edge, the
/// sum over containing cells of minus the local off-diagonal entry of its
/// endpoint pair. On squares this is exactly half the edge-form weight; it
/// is the weight source for coarse operators that precondition the MFD
/// system at matching scale.
EdgeWeights mfd_edge_weights(const PolygonalMesh& mesh, const Coefficient& kappa);

/// Unit-weight element-sum Laplacian; an edge shared by two cells
/// contributes once per cell. Eliminated to free dofs.
SparseOperator assemble_graph_laplacian(const PolygonalMesh& mesh, const DofMap& dofs);

/// Single-count graph Laplacian of the free-dof graph with the Dirichlet
/// diagonal (every incident mesh edge counts once). This is the operator the
/// Cheeger-constant spectral bounds are stated for.
SparseOperator dirichlet_graph_laplacian(const PolygonalMesh& mesh, const DofMap& dofs);

/// Load vector: per cell, the mean of f (fan quadrature from the mass
/// center, centroid rule per triangle) times weights |E| / n_E.
std::vector<double> assemble_rhs(const PolygonalMesh& mesh,
                                 const std::function<double(double, double)>& f,
                                 const DofMap& dofs);

}  // namespace mfd
