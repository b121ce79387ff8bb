#pragma once

#include <vector>

#include "mfd/discretization.hpp"
#include "mfd/mesh.hpp"
#include "mfd/sparse.hpp"

namespace mfd {

/// Free-dof graph of a mesh: one vertex per free dof, one edge per mesh edge
/// joining two free dofs (carrying its cell multiplicity), and per-vertex
/// degrees counting every incident mesh edge once per containing cell.
struct FreeGraph {
  int n = 0;
  struct GraphEdge {
    int u = 0;
    int v = 0;
    int multiplicity = 1;
  };
  std::vector<GraphEdge> edges;   // free-free edges only
  std::vector<int> degree;        // per free vertex, with multiplicity
};

FreeGraph free_dof_graph(const PolygonalMesh& mesh, const DofMap& dofs);

/// Plain graph (multiplicity 1, degrees from the listed edges) for
/// desk-scale checks on hand-built graphs.
FreeGraph plain_graph(int n, const std::vector<std::pair<int, int>>& edges);

inline constexpr int kMaxExactCheegerVertices = 24;

struct SpectralReport {
  int max_degree = 0;           // m_d
  bool cheeger_computed = false;
  double min_cut_ratio = 0.0;   // min over subsets of |cut| / min(|S|, |S^c|)
  double cheeger = 0.0;         // C_c = min_cut_ratio / (2 sqrt(m_d))
  double eig_min = 0.0;
  double eig_max = 0.0;
  bool lower_bound_holds = false;  // C_c^2 <= eig_min
  bool upper_bound_holds = false;  // eig_max <= m_d
};

/// Exhaustive Cheeger constant (graphs up to kMaxExactCheegerVertices; larger
/// graphs get a partial report) plus dense eigenvalue extremes of `laplacian`
/// when provided. The bound flags compare C_c^2 <= eig_min and eig_max <= m_d.
SpectralReport spectral_bounds(const SparseOperator* laplacian, const FreeGraph& graph);

}  // namespace mfd
