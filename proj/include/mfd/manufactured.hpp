#pragma once

#include <vector>

#include "mfd/discretization.hpp"
#include "mfd/mesh.hpp"

namespace mfd {

/// Test problem on the unit square with homogeneous Dirichlet data:
///   u(x1, x2) = x1 (x2 - x2^2) exp(x2) cos(pi x1 / 2),
/// f = -div(grad u) differentiated in closed form.
struct ManufacturedProblem {
  static double solution(double x1, double x2);
  static double forcing(double x1, double x2);
};

/// Load vector for the manufactured forcing (kappa = 1).
std::vector<double> manufactured_rhs(const PolygonalMesh& mesh, const DofMap& dofs);

}  // namespace mfd
