#include "mfd/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mfd/kernels.hpp"

namespace mfd {

Coefficient Coefficient::constant(const PolygonalMesh& mesh, double value) {
  if (value <= 0.0) throw std::invalid_argument("Coefficient: value must be positive");
  Coefficient k;
  k.per_cell.assign(mesh.n_cells(), value);
  k.kappa_star = k.kappa_sup = value;
  return k;
}

Coefficient Coefficient::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("Coefficient: empty");
  Coefficient k;
  k.kappa_star = k.kappa_sup = values.front();
  for (double v : values) {
    if (v <= 0.0) throw std::invalid_argument("Coefficient: values must be positive");
    k.kappa_star = std::min(k.kappa_star, v);
    k.kappa_sup = std::max(k.kappa_sup, v);
  }
  k.per_cell = std::move(values);
  return k;
}

DofMap DofMap::build(const PolygonalMesh& mesh) {
  DofMap d;
  d.vertex_to_dof.assign(mesh.n_vertices(), -1);
  for (const Vertex& v : mesh.vertices) {
    if (v.on_boundary) {
      d.constrained_dofs.push_back(v.id);
    } else {
      d.vertex_to_dof[v.id] = static_cast<int>(d.free_dofs.size());
      d.free_dofs.push_back(v.id);
    }
  }
  return d;
}

DofMap DofMap::all_free(const PolygonalMesh& mesh) {
  DofMap d;
  d.vertex_to_dof.resize(mesh.n_vertices());
  d.free_dofs.resize(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    d.vertex_to_dof[v] = v;
    d.free_dofs[v] = v;
  }
  return d;
}

DenseMatrix build_N(const PolygonalMesh& mesh, const Cell& cell) {
  const int n = static_cast<int>(cell.vertex_loop.size());
  DenseMatrix N(n, 3);
  for (int i = 0; i < n; ++i) {
    const Point2 p = mesh.vertex_position(cell.vertex_loop[i]);
    N(i, 0) = 1.0;
    N(i, 1) = p.x - cell.mass_center.x;
    N(i, 2) = p.y - cell.mass_center.y;
  }
  return N;
}

DenseMatrix build_R(const PolygonalMesh& mesh, const Cell& cell, double kappa) {
  const int n = static_cast<int>(cell.vertex_loop.size());
  DenseMatrix R(n, 3);
  for (int i = 0; i < n; ++i) {
    const Point2 prev = mesh.vertex_position(cell.vertex_loop[(i + n - 1) % n]);
    const Point2 next = mesh.vertex_position(cell.vertex_loop[(i + 1) % n]);
    R(i, 0) = 0.0;
    R(i, 1) = 0.5 * kappa * (next.y - prev.y);
    R(i, 2) = 0.5 * kappa * (prev.x - next.x);
  }
  return R;
}

LocalStiffness local_stiffness(const PolygonalMesh& mesh, const Cell& cell, double kappa) {
  const int n = static_cast<int>(cell.vertex_loop.size());
  LocalStiffness ls;
  ls.cell_id = cell.id;
  ls.N_mat = build_N(mesh, cell);
  ls.R_mat = build_R(mesh, cell, kappa);

  // Gram matrix N^T N and P = I - N (N^T N)^{-1} N^T.
  DenseMatrix g(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += ls.N_mat(i, a) * ls.N_mat(i, b);
      g(a, b) = s;
    }
  DenseMatrix ginv_nt(3, n);  // (N^T N)^{-1} N^T, column by column
  try {
    for (int i = 0; i < n; ++i) {
      const std::vector<double> rhs = {ls.N_mat(i, 0), ls.N_mat(i, 1), ls.N_mat(i, 2)};
      const std::vector<double> col = solve3(g, rhs);
      for (int a = 0; a < 3; ++a) ginv_nt(a, i) = col[a];
    }
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "local_stiffness: N^T N is singular on cell " << cell.id
       << " (degenerate or collinear vertices)";
    throw std::runtime_error(os.str());
  }
  ls.P_mat = DenseMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = (i == j) ? 1.0 : 0.0;
      for (int a = 0; a < 3; ++a) s -= ls.N_mat(i, a) * ginv_nt(a, j);
      ls.P_mat(i, j) = s;
    }
  }

  const double inv_ke = 1.0 / (kappa * cell.area);
  DenseMatrix rrt(n, n);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += ls.R_mat(i, a) * ls.R_mat(j, a);
      rrt(i, j) = inv_ke * s;
    }
    trace += rrt(i, i);
  }
  ls.scaling = trace;
  ls.matrix = DenseMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ls.matrix(i, j) = rrt(i, j) + trace * ls.P_mat(i, j);
  // enforce exact symmetry against round-off drift
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (ls.matrix(i, j) + ls.matrix(j, i));
      ls.matrix(i, j) = ls.matrix(j, i) = v;
    }
  return ls;
}

SparseOperator assemble_mfd(const PolygonalMesh& mesh, const Coefficient& kappa, const DofMap& dofs) {
  if (static_cast<int>(kappa.per_cell.size()) != mesh.n_cells())
    throw std::invalid_argument("assemble_mfd: coefficient size mismatch");

  const int nc = mesh.n_cells();
  std::vector<LocalStiffness> locals(nc);
  const int workers = std::min(kernels::thread_count(), nc);
  if (workers > 1) {
    // Cells are independent; scatter below stays in cell order.
    std::vector<std::thread> pool;
    const int chunk = (nc + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int c0 = w * chunk;
      const int c1 = std::min(nc, c0 + chunk);
      if (c0 >= c1) break;
      pool.emplace_back([&, c0, c1] {
        for (int c = c0; c < c1; ++c) locals[c] = local_stiffness(mesh, mesh.cells[c], kappa.per_cell[c]);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (int c = 0; c < nc; ++c) locals[c] = local_stiffness(mesh, mesh.cells[c], kappa.per_cell[c]);
  }

  std::vector<Triplet> trips;
  for (int c = 0; c < nc; ++c) {
    const Cell& cell = mesh.cells[c];
    const int n = static_cast<int>(cell.vertex_loop.size());
    for (int i = 0; i < n; ++i) {
      const int di = dofs.vertex_to_dof[cell.vertex_loop[i]];
      if (di < 0) continue;
      for (int j = 0; j < n; ++j) {
        const int dj = dofs.vertex_to_dof[cell.vertex_loop[j]];
        if (dj < 0) continue;
        trips.push_back({di, dj, locals[c].matrix(i, j)});
      }
    }
  }
  return operator_from_triplets(dofs.n_free(), std::move(trips));
}

namespace {

SparseOperator assemble_weighted_edges(const PolygonalMesh& mesh, const DofMap& dofs,
                                       const std::vector<double>& weight) {
  std::vector<Triplet> trips;
  for (const Edge& e : mesh.edges) {
    const double w = weight[e.id];
    if (w == 0.0) continue;
    const int da = dofs.vertex_to_dof[e.v0];
    const int db = dofs.vertex_to_dof[e.v1];
    if (da >= 0) trips.push_back({da, da, w});
    if (db >= 0) trips.push_back({db, db, w});
    if (da >= 0 && db >= 0) {
      trips.push_back({da, db, -w});
      trips.push_back({db, da, -w});
    }
  }
  return operator_from_triplets(dofs.n_free(), std::move(trips));
}

std::vector<int> edge_cell_multiplicity(const PolygonalMesh& mesh) {
  std::vector<int> mult(mesh.n_edges(), 0);
  for (const Cell& c : mesh.cells)
    for (int e : c.edge_ids) ++mult[e];
  return mult;
}

}  // namespace

std::pair<SparseOperator, EdgeWeights> assemble_edge_form(const PolygonalMesh& mesh,
                                                          const Coefficient& kappa,
                                                          const DofMap& dofs) {
  if (static_cast<int>(kappa.per_cell.size()) != mesh.n_cells())
    throw std::invalid_argument("assemble_edge_form: coefficient size mismatch");
  EdgeWeights w;
  w.a_e.assign(mesh.n_edges(), 0.0);
  for (const Cell& c : mesh.cells)
    for (int e : c.edge_ids) {
      const double he = mesh.edges[e].length;
      w.a_e[e] += kappa.per_cell[c.id] * c.area / (he * he);
    }
  SparseOperator a = assemble_weighted_edges(mesh, dofs, w.a_e);
  return {std::move(a), std::move(w)};
}

EdgeWeights mfd_edge_weights(const PolygonalMesh& mesh, const Coefficient& kappa) {
  if (static_cast<int>(kappa.per_cell.size()) != mesh.n_cells())
    throw std::invalid_argument("mfd_edge_weights: coefficient size mismatch");
  EdgeWeights w;
  w.a_e.assign(mesh.n_edges(), 0.0);
  for (const Cell& cell : mesh.cells) {
    const LocalStiffness ls = local_stiffness(mesh, cell, kappa.per_cell[cell.id]);
    const std::size_t n = cell.vertex_loop.size();
    for (std::size_t k = 0; k < n; ++k)
      w.a_e[cell.edge_ids[k]] -= ls.matrix(static_cast<int>(k), static_cast<int>((k + 1) % n));
  }
  return w;
}

SparseOperator assemble_graph_laplacian(const PolygonalMesh& mesh, const DofMap& dofs) {
  const std::vector<int> mult = edge_cell_multiplicity(mesh);
  std::vector<double> w(mult.begin(), mult.end());
  return assemble_weighted_edges(mesh, dofs, w);
}

SparseOperator dirichlet_graph_laplacian(const PolygonalMesh& mesh, const DofMap& dofs) {
  std::vector<double> w(mesh.n_edges(), 1.0);
  return assemble_weighted_edges(mesh, dofs, w);
}

std::vector<double> assemble_rhs(const PolygonalMesh& mesh,
                                 const std::function<double(double, double)>& f,
                                 const DofMap& dofs) {
  std::vector<double> b(dofs.n_free(), 0.0);
  for (const Cell& cell : mesh.cells) {
    const std::size_t n = cell.vertex_loop.size();
    // fan quadrature from the mass center, one centroid point per triangle
    double integral = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Point2 p = mesh.vertex_position(cell.vertex_loop[k]);
      const Point2 q = mesh.vertex_position(cell.vertex_loop[(k + 1) % n]);
      const double tri_area = 0.5 * cross(p - cell.mass_center, q - cell.mass_center);
      const Point2 centroid = (1.0 / 3.0) * (p + q + cell.mass_center);
      integral += tri_area * f(centroid.x, centroid.y);
    }
    const double fbar = integral / cell.area;
    const double load = fbar * cell.area / static_cast<double>(n);  // weights |E| / n_E
    for (int v : cell.vertex_loop) {
      const int d = dofs.vertex_to_dof[v];
      if (d >= 0) b[d] += load;
    }
  }
  return b;
}

}  // namespace mfd
