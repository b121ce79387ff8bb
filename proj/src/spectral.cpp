#include "mfd/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mfd {

FreeGraph free_dof_graph(const PolygonalMesh& mesh, const DofMap& dofs) {
  FreeGraph g;
  g.n = dofs.n_free();
  g.degree.assign(g.n, 0);
  std::vector<int> mult(mesh.n_edges(), 0);
  for (const Cell& c : mesh.cells)
    for (int e : c.edge_ids) ++mult[e];
  for (const Edge& e : mesh.edges) {
    const int du = dofs.vertex_to_dof[e.v0];
    const int dv = dofs.vertex_to_dof[e.v1];
    if (du >= 0) g.degree[du] += mult[e.id];
    if (dv >= 0) g.degree[dv] += mult[e.id];
    if (du >= 0 && dv >= 0) g.edges.push_back({du, dv, mult[e.id]});
  }
  return g;
}

FreeGraph plain_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  FreeGraph g;
  g.n = n;
  g.degree.assign(n, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw std::invalid_argument("plain_graph: bad edge");
    g.edges.push_back({u, v, 1});
    ++g.degree[u];
    ++g.degree[v];
  }
  return g;
}

SpectralReport spectral_bounds(const SparseOperator* laplacian, const FreeGraph& graph) {
  SpectralReport rep;
  for (int d : graph.degree) rep.max_degree = std::max(rep.max_degree, d);

  if (graph.n >= 2 && graph.n <= kMaxExactCheegerVertices && !graph.edges.empty()) {
    // Exhaustive subset scan; the complement symmetry is factored out by
    // pinning vertex n-1 to the complement side.
    const int n = graph.n;
    const std::uint32_t limit = (n == 1) ? 0u : (1u << (n - 1));
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      int cut = 0;
      for (const FreeGraph::GraphEdge& e : graph.edges) {
        const bool su = (e.u < n - 1) && ((mask >> e.u) & 1u);
        const bool sv = (e.v < n - 1) && ((mask >> e.v) & 1u);
        if (su != sv) ++cut;
      }
      const int size_s = std::popcount(mask);
      const double ratio = static_cast<double>(cut) / std::min(size_s, n - size_s);
      best = std::min(best, ratio);
    }
    rep.min_cut_ratio = best;
    rep.cheeger = best / (2.0 * std::sqrt(static_cast<double>(rep.max_degree)));
    rep.cheeger_computed = true;
  }

  if (laplacian != nullptr) {
    if (laplacian->n != graph.n)
      throw std::invalid_argument("spectral_bounds: operator/graph size mismatch");
    const std::vector<double> eigs = symmetric_eigenvalues(to_dense(*laplacian));
    rep.eig_min = eigs.front();
    rep.eig_max = eigs.back();
    if (rep.cheeger_computed)
      rep.lower_bound_holds = rep.cheeger * rep.cheeger <= rep.eig_min + 1e-10;
    rep.upper_bound_holds = rep.eig_max <= static_cast<double>(rep.max_degree) + 1e-10;
  }
  return rep;
}

}  // namespace mfd
