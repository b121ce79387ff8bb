// Structured initial partitions of the unit square.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mfd/mesh.hpp"

namespace mfd {

namespace {

/// Deduplicating vertex registry with tolerance-based snapping.
class PointRegistry {
 public:
  int insert(Point2 p) {
    const long long qx = quantize(p.x);
    const long long qy = quantize(p.y);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = index_.find(key(qx + dx, qy + dy));
        if (it == index_.end()) continue;
        for (int id : it->second)
          if (distance(points_[id], p) < kGeomTol) return id;
      }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    index_[key(qx, qy)].push_back(id);
    return id;
  }

  std::vector<Point2> take() { return std::move(points_); }

 private:
  static long long quantize(double x) { return static_cast<long long>(std::floor(x / 1e-9)); }
  static long long key(long long qx, long long qy) { return qx * 2000003LL + qy; }

  std::vector<Point2> points_;
  std::unordered_map<long long, std::vector<int>> index_;
};

PolygonalMesh make_quad(int m) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
  auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) pts.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
  std::vector<std::vector<int>> loops;
  loops.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return build_from_cells(std::move(pts), std::move(loops));
}

PolygonalMesh make_tria(int m) {
  std::vector<Point2> pts;
  auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) pts.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
  std::vector<std::vector<int>> loops;
  loops.reserve(2u * m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      loops.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return build_from_cells(std::move(pts), std::move(loops));
}

// Honeycomb fitted to the unit square. Pointy-top hexagon rows i = 1..N-1
// sit at heights i/N; x = 0 and x = 1 pass through hexagon centers on even
// rows (leaving half-hexagon quads) and along vertical edges on odd rows.
// The zigzag gaps above y = 0 and below y = 1 are filled with one row of
// trapezoid bricks each, so every boundary cell is a well-proportioned
// convex quad and no sliver can arise.
PolygonalMesh make_hex(int rows) {
  if (rows < 2 || rows % 2 != 0) throw std::invalid_argument("make_hex: rows must be even, >= 2");
  const int cols = std::max(2, static_cast<int>(std::lround(0.8660254037844386 * rows)));
  const double a = 1.0 / cols;          // horizontal pitch
  const double r = 2.0 / (3.0 * rows);  // center-to-apex
  const double c = 1.0 / (3.0 * rows);  // half-height of the vertical edge

  PointRegistry reg;
  std::vector<std::vector<int>> loops;
  auto add = [&](std::vector<Point2> poly) {
    std::vector<int> loop(poly.size());
    for (std::size_t k = 0; k < poly.size(); ++k) loop[k] = reg.insert(poly[k]);
    loops.push_back(std::move(loop));
  };

  for (int i = 1; i < rows; ++i) {
    const double cy = static_cast<double>(i) / rows;
    if (i % 2 == 1) {  // offset row, flush with x = 0 and x = 1
      for (int j = 0; j < cols; ++j) {
        const double cx = a * (j + 0.5);
        add({{cx, cy - r},
             {cx + 0.5 * a, cy - c},
             {cx + 0.5 * a, cy + c},
             {cx, cy + r},
             {cx - 0.5 * a, cy + c},
             {cx - 0.5 * a, cy - c}});
      }
    } else {  // aligned row, half-hexagons against x = 0 and x = 1
      add({{0.0, cy - r}, {0.5 * a, cy - c}, {0.5 * a, cy + c}, {0.0, cy + r}});
      for (int j = 1; j < cols; ++j) {
        const double cx = a * j;
        add({{cx, cy - r},
             {cx + 0.5 * a, cy - c},
             {cx + 0.5 * a, cy + c},
             {cx, cy + r},
             {cx - 0.5 * a, cy + c},
             {cx - 0.5 * a, cy - c}});
      }
      add({{1.0 - 0.5 * a, cy - c}, {1.0, cy - r}, {1.0, cy + r}, {1.0 - 0.5 * a, cy + c}});
    }
  }

  // Brick strips along y = 0 and y = 1. Stations at every half pitch; the
  // strip height alternates between the apex (r + c below a row center) and
  // the edge-corner level (2c below it) of the adjacent hexagon row.
  const double h_tip = 1.0 / rows - r;  // below an apex of row 1
  const double h_cor = 1.0 / rows - c;  // below a vertical-edge corner
  for (int s = 0; s < 2 * cols; ++s) {
    const double x0 = 0.5 * a * s;
    const double x1 = 0.5 * a * (s + 1);
    const double y0 = (s % 2 == 0) ? h_cor : h_tip;
    const double y1 = (s % 2 == 0) ? h_tip : h_cor;
    add({{x0, 0.0}, {x1, 0.0}, {x1, y1}, {x0, y0}});
    add({{x0, 1.0 - y0}, {x1, 1.0 - y1}, {x1, 1.0}, {x0, 1.0}});
  }

  return build_from_cells(reg.take(), std::move(loops));
}

}  // namespace

int initial_divisions(int level) {
  if (level < 1) throw std::invalid_argument("initial level must be >= 1");
  return 4 << (level - 1);
}

PolygonalMesh generate_initial(MeshFamily family, int level) {
  const int m = initial_divisions(level);
  switch (family) {
    case MeshFamily::Quad:
      return make_quad(m);
    case MeshFamily::Tria:
      return make_tria(m);
    case MeshFamily::Hex:
      // Half as many rows as grid divisions keeps the starting cell count
      // (and stiffness conditioning) comparable across the three families.
      return make_hex(m / 2);
  }
  throw std::invalid_argument("unknown mesh family");
}

}  // namespace mfd
