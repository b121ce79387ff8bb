#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mfd/discretization.hpp"
#include "mfd/mesh.hpp"
#include "mfd/spectral.hpp"

using namespace mfd;

TEST_CASE("path graph on two vertices") {
  const FreeGraph g = plain_graph(2, {{0, 1}});
  const SpectralReport rep = spectral_bounds(nullptr, g);
  CHECK(rep.max_degree == 1);
  REQUIRE(rep.cheeger_computed);
  CHECK(rep.min_cut_ratio == doctest::Approx(1.0));
  CHECK(rep.cheeger == doctest::Approx(0.5));
}

TEST_CASE("triangle graph K3") {
  const FreeGraph g = plain_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const SpectralReport rep = spectral_bounds(nullptr, g);
  CHECK(rep.max_degree == 2);
  REQUIRE(rep.cheeger_computed);
  CHECK(rep.min_cut_ratio == doctest::Approx(2.0));
  CHECK(rep.cheeger == doctest::Approx(2.0 / (2.0 * std::sqrt(2.0))));
}

TEST_CASE("square path with sides cut: ratio balances cut against side size") {
  // path 0-1-2-3: singleton ends give ratio 1
  const FreeGraph g = plain_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const SpectralReport rep = spectral_bounds(nullptr, g);
  CHECK(rep.max_degree == 2);
  CHECK(rep.min_cut_ratio == doctest::Approx(0.5));  // middle cut: 1 edge / 2 vertices
}

TEST_CASE("spectral bounds hold on every generated mesh small enough for exact search") {
  for (const MeshFamily fam : {MeshFamily::Tria, MeshFamily::Quad, MeshFamily::Hex}) {
    PolygonalMesh m = generate_initial(fam, 1);
    for (int l = 0; l < 2; ++l) {
      const DofMap dofs = DofMap::build(m);
      const FreeGraph g = free_dof_graph(m, dofs);
      const SparseOperator lap = dirichlet_graph_laplacian(m, dofs);
      const SpectralReport rep = spectral_bounds(&lap, g);
      CAPTURE(static_cast<int>(fam));
      CAPTURE(l);
      if (g.n <= kMaxExactCheegerVertices) {
        REQUIRE(rep.cheeger_computed);
        CHECK(rep.lower_bound_holds);
        CHECK(rep.cheeger * rep.cheeger <= rep.eig_min + 1e-10);
      } else {
        CHECK_FALSE(rep.cheeger_computed);  // partial report
      }
      CHECK(rep.upper_bound_holds);
      CHECK(rep.eig_max <= rep.max_degree + 1e-10);
      CHECK(rep.eig_min > 0.0);
      m = refine(m).fine;
    }
  }
}

TEST_CASE("free-dof graph carries cell multiplicity in degrees") {
  const PolygonalMesh m = generate_initial(MeshFamily::Quad, 1);
  const DofMap dofs = DofMap::build(m);
  const FreeGraph g = free_dof_graph(m, dofs);
  REQUIRE(g.n == 9);
  // every interior vertex of the 4x4 quad grid touches 4 edges, each shared
  // by two cells
  for (int d : g.degree) CHECK(d == 8);
  for (const auto& e : g.edges) CHECK(e.multiplicity == 2);
  // 3x3 interior grid has 12 free-free edges
  CHECK(g.edges.size() == 12);
}

TEST_CASE("quad L=1 exact values: cut ratio 1, bounds against dense eigenvalues") {
  const PolygonalMesh m = generate_initial(MeshFamily::Quad, 1);
  const DofMap dofs = DofMap::build(m);
  const FreeGraph g = free_dof_graph(m, dofs);
  const SparseOperator lap = dirichlet_graph_laplacian(m, dofs);
  const SpectralReport rep = spectral_bounds(&lap, g);
  CHECK(rep.max_degree == 8);
  CHECK(rep.min_cut_ratio == doctest::Approx(1.0));  // a 3-vertex column cut by 3 edges
  // dense oracle: interior Laplacian of the 3x3 grid has extremes 4 -/+ 2 sqrt(2)
  CHECK(rep.eig_min == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.eig_max == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.lower_bound_holds);
  CHECK(rep.upper_bound_holds);
}

TEST_CASE("oversized graphs get a partial report") {
  std::vector<std::pair<int, int>> edges;
  const int n = kMaxExactCheegerVertices + 2;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  const FreeGraph g = plain_graph(n, edges);
  const SpectralReport rep = spectral_bounds(nullptr, g);
  CHECK_FALSE(rep.cheeger_computed);
  CHECK(rep.max_degree == 2);
}
