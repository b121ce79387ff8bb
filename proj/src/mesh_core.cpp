// Mesh assembly from raw cells, geometry derivation, and quality checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "mfd/mesh.hpp"

namespace mfd {

namespace {

bool on_unit_square_boundary(Point2 p) {
  return std::abs(p.x) < kGeomTol || std::abs(p.x - 1.0) < kGeomTol ||
         std::abs(p.y) < kGeomTol || std::abs(p.y - 1.0) < kGeomTol;
}

double signed_area(const std::vector<Point2>& loop) {
  double s = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = loop[i];
    const Point2 b = loop[(i + 1) % n];
    s += cross(a, b);
  }
  return 0.5 * s;
}

Point2 area_centroid(const std::vector<Point2>& loop, double area) {
  double cx = 0.0, cy = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = loop[i];
    const Point2 b = loop[(i + 1) % n];
    const double w = cross(a, b);
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

}  // namespace

bool is_convex_ccw(const std::vector<Point2>& loop, double tol) {
  const std::size_t n = loop.size();
  if (n < 3) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e = loop[(i + 1) % n] - loop[i];
    scale = std::max(scale, std::abs(e.x) + std::abs(e.y));
  }
  const double eps = tol * std::max(1.0, scale * scale);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = loop[(i + 1) % n] - loop[i];
    const Point2 e1 = loop[(i + 2) % n] - loop[(i + 1) % n];
    if (cross(e0, e1) <= eps) return false;
  }
  return true;
}

PolygonalMesh build_from_cells(std::vector<Point2> points, std::vector<std::vector<int>> loops) {
  PolygonalMesh mesh;
  mesh.vertices.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Vertex& v = mesh.vertices[i];
    v.id = static_cast<int>(i);
    v.position = points[i];
    v.on_boundary = on_unit_square_boundary(points[i]);
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
      throw std::invalid_argument("build_from_cells: non-finite vertex coordinate");
  }

  std::map<std::pair<int, int>, int> edge_of;
  mesh.cells.resize(loops.size());
  for (std::size_t c = 0; c < loops.size(); ++c) {
    Cell& cell = mesh.cells[c];
    cell.id = static_cast<int>(c);
    cell.vertex_loop = std::move(loops[c]);
    const std::size_t nv = cell.vertex_loop.size();
    if (nv < 3) throw std::invalid_argument("build_from_cells: cell with fewer than 3 vertices");
    for (int v : cell.vertex_loop)
      if (v < 0 || v >= mesh.n_vertices())
        throw std::invalid_argument("build_from_cells: vertex index out of range");

    std::vector<Point2> pts(nv);
    for (std::size_t k = 0; k < nv; ++k) pts[k] = points[cell.vertex_loop[k]];
    double a = signed_area(pts);
    if (a < 0.0) {  // normalize to counterclockwise
      std::reverse(cell.vertex_loop.begin(), cell.vertex_loop.end());
      std::reverse(pts.begin(), pts.end());
      a = -a;
    }
    if (a <= 0.0) {
      std::ostringstream os;
      os << "build_from_cells: cell " << c << " has nonpositive area";
      throw std::invalid_argument(os.str());
    }
    cell.area = a;
    Point2 avg{0.0, 0.0};
    for (const Point2& p : pts) avg = avg + p;
    cell.vertex_average = (1.0 / static_cast<double>(nv)) * avg;
    cell.mass_center = area_centroid(pts, a);
    double diam = 0.0;
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = i + 1; j < nv; ++j) diam = std::max(diam, distance(pts[i], pts[j]));
    cell.diameter = diam;

    cell.edge_ids.resize(nv);
    for (std::size_t k = 0; k < nv; ++k) {
      const int u = cell.vertex_loop[k];
      const int w = cell.vertex_loop[(k + 1) % nv];
      if (u == w) throw std::invalid_argument("build_from_cells: degenerate edge");
      const std::pair<int, int> key(std::min(u, w), std::max(u, w));
      auto it = edge_of.find(key);
      int eid;
      if (it == edge_of.end()) {
        eid = static_cast<int>(mesh.edges.size());
        edge_of.emplace(key, eid);
        Edge e;
        e.id = eid;
        e.v0 = key.first;
        e.v1 = key.second;
        e.length = distance(points[e.v0], points[e.v1]);
        if (e.length <= 0.0) throw std::invalid_argument("build_from_cells: zero-length edge");
        mesh.edges.push_back(e);
      } else {
        eid = it->second;
      }
      cell.edge_ids[k] = eid;
    }
  }

  double h = 0.0;
  for (const Cell& c : mesh.cells) h = std::max(h, c.diameter);
  mesh.characteristic_size = h;
  return mesh;
}

QualityReport validate(const PolygonalMesh& mesh) {
  QualityReport rep;
  std::ostringstream issues;

  rep.min_diameter_to_edge = rep.min_diameter2_to_area = std::numeric_limits<double>::infinity();
  rep.max_diameter_to_edge = rep.max_diameter2_to_area = 0.0;
  for (const Cell& c : mesh.cells) {
    rep.max_vertices_per_cell = std::max(rep.max_vertices_per_cell, static_cast<int>(c.vertex_loop.size()));
    const double r2 = c.diameter * c.diameter / c.area;
    rep.min_diameter2_to_area = std::min(rep.min_diameter2_to_area, r2);
    rep.max_diameter2_to_area = std::max(rep.max_diameter2_to_area, r2);
    for (int e : c.edge_ids) {
      const double r = c.diameter / mesh.edges[e].length;
      rep.min_diameter_to_edge = std::min(rep.min_diameter_to_edge, r);
      rep.max_diameter_to_edge = std::max(rep.max_diameter_to_edge, r);
    }
    std::vector<Point2> pts(c.vertex_loop.size());
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = mesh.vertex_position(c.vertex_loop[k]);
    if (!is_convex_ccw(pts)) {
      rep.convex = false;
      issues << "cell " << c.id << " is not strictly convex/ccw; ";
    }
  }

  // Edge/cell incidence: interior edges border 2 cells, boundary edges 1,
  // and a 1-cell edge must lie on the domain boundary.
  std::vector<int> incidence(mesh.edges.size(), 0);
  for (const Cell& c : mesh.cells)
    for (int e : c.edge_ids) ++incidence[e];
  for (const Edge& e : mesh.edges) {
    const int cnt = incidence[e.id];
    if (cnt != 1 && cnt != 2) {
      rep.conforming = false;
      issues << "edge " << e.id << " borders " << cnt << " cells; ";
    } else if (cnt == 1) {
      const Point2 a = mesh.vertex_position(e.v0);
      const Point2 b = mesh.vertex_position(e.v1);
      const Point2 m = midpoint(a, b);
      const bool on_bdry = (std::abs(a.x) < kGeomTol && std::abs(b.x) < kGeomTol) ||
                           (std::abs(a.x - 1.0) < kGeomTol && std::abs(b.x - 1.0) < kGeomTol) ||
                           (std::abs(a.y) < kGeomTol && std::abs(b.y) < kGeomTol) ||
                           (std::abs(a.y - 1.0) < kGeomTol && std::abs(b.y - 1.0) < kGeomTol);
      (void)m;
      if (!on_bdry) {
        rep.conforming = false;
        issues << "interior edge " << e.id << " borders a single cell; ";
      }
    }
  }

  // Hanging vertices: a vertex in the strict interior of an edge breaks
  // conformity. Bucketed scan keeps this near-linear.
  if (!mesh.edges.empty()) {
    double hmin = std::numeric_limits<double>::infinity();
    for (const Edge& e : mesh.edges) hmin = std::min(hmin, e.length);
    const double cellsize = std::max(hmin, 1e-6);
    auto bucket = [&](double x) { return static_cast<long long>(std::floor(x / cellsize)); };
    std::unordered_map<long long, std::vector<int>> grid;
    auto key = [](long long bx, long long by) { return bx * 2000003LL + by; };
    for (const Vertex& v : mesh.vertices)
      grid[key(bucket(v.position.x), bucket(v.position.y))].push_back(v.id);
    for (const Edge& e : mesh.edges) {
      const Point2 a = mesh.vertex_position(e.v0);
      const Point2 b = mesh.vertex_position(e.v1);
      const long long bx0 = std::min(bucket(a.x), bucket(b.x)) - 1;
      const long long bx1 = std::max(bucket(a.x), bucket(b.x)) + 1;
      const long long by0 = std::min(bucket(a.y), bucket(b.y)) - 1;
      const long long by1 = std::max(bucket(a.y), bucket(b.y)) + 1;
      for (long long bx = bx0; bx <= bx1; ++bx)
        for (long long by = by0; by <= by1; ++by) {
          auto it = grid.find(key(bx, by));
          if (it == grid.end()) continue;
          for (int vid : it->second) {
            if (vid == e.v0 || vid == e.v1) continue;
            const Point2 p = mesh.vertex_position(vid);
            const Point2 ab = b - a;
            const double len2 = dot(ab, ab);
            const double t = dot(p - a, ab) / len2;
            if (t <= kGeomTol || t >= 1.0 - kGeomTol) continue;
            const Point2 proj = a + t * ab;
            if (distance(proj, p) < kGeomTol) {
              rep.conforming = false;
              issues << "vertex " << vid << " hangs on edge " << e.id << "; ";
            }
          }
        }
    }
  }

  rep.issues = issues.str();
  return rep;
}

}  // namespace mfd
