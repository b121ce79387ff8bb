// Uniform refinement: each n-gon is split into n quadrilaterals joining a
// vertex, its two adjacent edge midpoints, and the cell point (the average
// of the cell's vertices).

#include <array>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mfd/mesh.hpp"

namespace mfd {

MeshHierarchy refine(const PolygonalMesh& coarse) {
  const int nv = coarse.n_vertices();
  const int ne = coarse.n_edges();
  const int nc = coarse.n_cells();

  for (const Cell& cell : coarse.cells) {
    std::vector<Point2> pts(cell.vertex_loop.size());
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = coarse.vertex_position(cell.vertex_loop[k]);
    if (!is_convex_ccw(pts)) {
      std::ostringstream os;
      os << "refine: cell " << cell.id << " is not convex; cell point may fall outside";
      throw std::runtime_error(os.str());
    }
  }

  // Fine vertex numbering: coarse images, then edge midpoints, then cell points.
  std::vector<Point2> pts(static_cast<std::size_t>(nv) + ne + nc);
  for (int v = 0; v < nv; ++v) pts[v] = coarse.vertex_position(v);
  for (int e = 0; e < ne; ++e)
    pts[nv + e] = midpoint(coarse.vertex_position(coarse.edges[e].v0),
                           coarse.vertex_position(coarse.edges[e].v1));
  for (int c = 0; c < nc; ++c) pts[nv + ne + c] = coarse.cells[c].vertex_average;

  std::vector<std::vector<int>> loops;
  for (const Cell& cell : coarse.cells) {
    const std::size_t n = cell.vertex_loop.size();
    const int center = nv + ne + cell.id;
    for (std::size_t k = 0; k < n; ++k) {
      const int v = cell.vertex_loop[k];
      const int m_next = nv + cell.edge_ids[k];                    // midpoint of edge (k, k+1)
      const int m_prev = nv + cell.edge_ids[(k + n - 1) % n];      // midpoint of edge (k-1, k)
      loops.push_back({v, m_next, center, m_prev});
    }
  }

  MeshHierarchy hier;
  hier.coarse = coarse;
  hier.fine = build_from_cells(std::move(pts), std::move(loops));

  for (int v = 0; v < nv; ++v) hier.fine.vertices[v].kind = VertexKind::CoarseVertex;
  for (int e = 0; e < ne; ++e) hier.fine.vertices[nv + e].kind = VertexKind::EdgeMidpoint;
  for (int c = 0; c < nc; ++c) hier.fine.vertices[nv + ne + c].kind = VertexKind::CellCenter;

  hier.coarse_vertex_image.resize(nv);
  for (int v = 0; v < nv; ++v) hier.coarse_vertex_image[v] = v;
  hier.midpoint_of_coarse_edge.resize(ne);
  for (int e = 0; e < ne; ++e) hier.midpoint_of_coarse_edge[e] = nv + e;
  hier.center_of_coarse_cell.resize(nc);
  for (int c = 0; c < nc; ++c) hier.center_of_coarse_cell[c] = nv + ne + c;

  hier.fine_edge_class.resize(hier.fine.n_edges());
  hier.halves_of_coarse_edge.assign(ne, {-1, -1});
  hier.interior_edges_of_coarse_cell.assign(nc, {});
  for (const Edge& fe : hier.fine.edges) {
    const int a = fe.v0;
    const int b = fe.v1;
    const bool a_center = a >= nv + ne;
    const bool b_center = b >= nv + ne;
    FineEdgeClass cls;
    if (a_center || b_center) {
      cls.kind = FineEdgeKind::Interior;
      cls.parent = (a_center ? a : b) - nv - ne;
      hier.interior_edges_of_coarse_cell[cls.parent].push_back(fe.id);
    } else {
      const bool a_mid = a >= nv;
      const bool b_mid = b >= nv;
      if (a_mid == b_mid)
        throw std::runtime_error("refine: unexpected fine edge between same-kind vertices");
      const int mid = a_mid ? a : b;
      const int cv = a_mid ? b : a;
      const int ce = mid - nv;
      cls.kind = FineEdgeKind::BoundaryHalf;
      cls.parent = ce;
      cls.half = (coarse.edges[ce].v0 == cv) ? 0 : 1;
      if (coarse.edges[ce].v0 != cv && coarse.edges[ce].v1 != cv)
        throw std::runtime_error("refine: half edge does not touch its coarse edge");
      hier.halves_of_coarse_edge[ce][cls.half] = fe.id;
    }
    hier.fine_edge_class[fe.id] = cls;
  }
  for (int e = 0; e < ne; ++e)
    if (hier.halves_of_coarse_edge[e][0] < 0 || hier.halves_of_coarse_edge[e][1] < 0)
      throw std::runtime_error("refine: coarse edge did not produce two halves");

  return hier;
}

}  // namespace mfd
