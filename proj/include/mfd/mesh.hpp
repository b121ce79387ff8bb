#pragma once

#include <array>
#include <string>
#include <vector>

#include "mfd/geometry.hpp"

namespace mfd {

enum class VertexKind { CoarseVertex, EdgeMidpoint, CellCenter };

struct Vertex {
  int id = -1;
  Point2 position;
  bool on_boundary = false;
  VertexKind kind = VertexKind::CoarseVertex;
};

struct Edge {
  int id = -1;
  int v0 = -1;
  int v1 = -1;
  double length = 0.0;
};

struct Cell {
  int id = -1;
  std::vector<int> vertex_loop;  // counterclockwise
  std::vector<int> edge_ids;     // edge_ids[k] joins vertex_loop[k] and vertex_loop[k+1]
  double area = 0.0;
  double diameter = 0.0;
  Point2 vertex_average;  // arithmetic mean of the vertex positions
  Point2 mass_center;     // area centroid; distinct from vertex_average
};

struct PolygonalMesh {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Cell> cells;
  double characteristic_size = 0.0;  // max cell diameter

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  Point2 vertex_position(int v) const { return vertices[v].position; }
};

enum class MeshFamily { Tria, Quad, Hex };

/// Grid divisions used by the Tria/Quad generators: 4, 8, 16, ... for L = 1, 2, 3, ...
int initial_divisions(int level);

/// Structured conforming partitions of the unit square. Tria: two right
/// triangles per grid square. Quad: uniform squares. Hex: honeycomb whose
/// rows/columns are aligned so the square sides cut hexagons through cell
/// centers or along edges; boundary cells are convex pentagons and quads.
PolygonalMesh generate_initial(MeshFamily family, int level);

/// Assemble a mesh from raw vertex positions and CCW (or CW; loops are
/// reoriented) cell loops. Edge table, geometry, and boundary flags are
/// derived. Used by generators, the mesh reader, and tests.
PolygonalMesh build_from_cells(std::vector<Point2> points, std::vector<std::vector<int>> loops);

enum class FineEdgeKind { BoundaryHalf, Interior };

/// Classification of a fine edge: either one of the two halves of a coarse
/// edge (with `half` 0/1 toward that edge's v0/v1), or an interior spoke of
/// a coarse cell joining its center point to an edge midpoint.
struct FineEdgeClass {
  FineEdgeKind kind = FineEdgeKind::Interior;
  int parent = -1;  // coarse edge id or coarse cell id
  int half = -1;
};

struct MeshHierarchy {
  PolygonalMesh coarse;
  PolygonalMesh fine;
  std::vector<int> coarse_vertex_image;            // coarse vertex -> fine vertex
  std::vector<int> midpoint_of_coarse_edge;        // coarse edge -> fine vertex
  std::vector<int> center_of_coarse_cell;          // coarse cell -> fine vertex
  std::vector<FineEdgeClass> fine_edge_class;      // per fine edge
  std::vector<std::array<int, 2>> halves_of_coarse_edge;
  std::vector<std::vector<int>> interior_edges_of_coarse_cell;
};

/// Uniform refinement: every coarse cell with n vertices is replaced by n
/// quadrilaterals joining a vertex, its two adjacent edge midpoints, and the
/// cell point (the vertex average). Throws on non-convex cells.
MeshHierarchy refine(const PolygonalMesh& coarse);

struct QualityReport {
  int max_vertices_per_cell = 0;
  double min_diameter_to_edge = 0.0;   // H_E / |e| extremes over (cell, edge)
  double max_diameter_to_edge = 0.0;
  double min_diameter2_to_area = 0.0;  // H_E^2 / |E| extremes over cells
  double max_diameter2_to_area = 0.0;
  bool conforming = true;
  bool convex = true;
  std::string issues;
};

/// Report-only mesh diagnostics: shape-regularity ratios, conformity
/// (edge/cell incidence, hanging vertices), convexity.
QualityReport validate(const PolygonalMesh& mesh);

bool is_convex_ccw(const std::vector<Point2>& loop, double tol = 1e-14);

}  // namespace mfd
