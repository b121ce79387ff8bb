#include "mfd/mesh_io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mfd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("mesh read: " + what); }

}  // namespace

void write_mesh(const PolygonalMesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.n_vertices() << " edges " << mesh.n_edges() << " cells "
      << mesh.n_cells() << "\n";
  char buf[96];
  for (const Vertex& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %d %d\n", v.id, v.position.x, v.position.y,
                  v.on_boundary ? 1 : 0, static_cast<int>(v.kind));
    out << buf;
  }
  for (const Edge& e : mesh.edges) out << e.id << " " << e.v0 << " " << e.v1 << "\n";
  for (const Cell& c : mesh.cells) {
    out << c.id << " " << c.vertex_loop.size();
    for (int v : c.vertex_loop) out << " " << v;
    out << "\n";
  }
}

PolygonalMesh read_mesh(std::istream& in) {
  std::string kw1, kw2, kw3;
  int nv = 0, ne = 0, nc = 0;
  if (!(in >> kw1 >> nv >> kw2 >> ne >> kw3 >> nc)) fail("bad header");
  if (kw1 != "vertices" || kw2 != "edges" || kw3 != "cells") fail("bad header keywords");
  if (nv < 3 || ne < 3 || nc < 1) fail("implausible counts");

  std::vector<Point2> pts(nv);
  std::vector<int> bflag(nv), kind(nv);
  for (int i = 0; i < nv; ++i) {
    int id = -1;
    double x = 0.0, y = 0.0;
    if (!(in >> id >> x >> y >> bflag[i] >> kind[i])) fail("bad vertex line");
    if (id != i) fail("vertex ids must be 0..N-1 in order");
    if (kind[i] < 0 || kind[i] > 2) fail("bad vertex kind");
    if (bflag[i] != 0 && bflag[i] != 1) fail("bad boundary flag");
    pts[i] = {x, y};
  }
  std::map<std::pair<int, int>, int> file_edges;
  for (int i = 0; i < ne; ++i) {
    int id = -1, a = -1, b = -1;
    if (!(in >> id >> a >> b)) fail("bad edge line");
    if (id != i) fail("edge ids must be 0..M-1 in order");
    if (a < 0 || a >= nv || b < 0 || b >= nv || a == b) fail("bad edge endpoints");
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (!file_edges.emplace(key, id).second) fail("duplicate edge");
  }
  std::vector<std::vector<int>> loops(nc);
  for (int i = 0; i < nc; ++i) {
    int id = -1, n = 0;
    if (!(in >> id >> n)) fail("bad cell line");
    if (id != i) fail("cell ids must be 0..K-1 in order");
    if (n < 3 || n > 64) fail("bad cell vertex count");
    loops[i].resize(n);
    for (int k = 0; k < n; ++k) {
      if (!(in >> loops[i][k])) fail("bad cell vertex index");
      if (loops[i][k] < 0 || loops[i][k] >= nv) fail("cell vertex out of range");
    }
  }

  PolygonalMesh mesh = build_from_cells(std::move(pts), std::move(loops));
  if (mesh.n_edges() != ne) fail("edge count does not match cell adjacency");
  for (const Edge& e : mesh.edges) {
    const auto key = std::make_pair(std::min(e.v0, e.v1), std::max(e.v0, e.v1));
    if (file_edges.find(key) == file_edges.end()) fail("edge list does not match cell adjacency");
  }
  for (int i = 0; i < nv; ++i) {
    if ((bflag[i] != 0) != mesh.vertices[i].on_boundary) {
      std::ostringstream os;
      os << "boundary flag of vertex " << i << " disagrees with its position";
      fail(os.str());
    }
    mesh.vertices[i].kind = static_cast<VertexKind>(kind[i]);
  }
  return mesh;
}

}  // namespace mfd
