#include "mfd/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace mfd {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// u = X(x1) Y(x2), X = x1 cos(pi x1 / 2), Y = (x2 - x2^2) exp(x2)
double x_part(double x1) { return x1 * std::cos(kHalfPi * x1); }
double x_part_dd(double x1) {
  return -std::numbers::pi * std::sin(kHalfPi * x1) - kHalfPi * kHalfPi * x1 * std::cos(kHalfPi * x1);
}
double y_part(double x2) { return (x2 - x2 * x2) * std::exp(x2); }
double y_part_dd(double x2) { return -x2 * (x2 + 3.0) * std::exp(x2); }

}  // namespace

double ManufacturedProblem::solution(double x1, double x2) { return x_part(x1) * y_part(x2); }

double ManufacturedProblem::forcing(double x1, double x2) {
  return -(x_part_dd(x1) * y_part(x2) + x_part(x1) * y_part_dd(x2));
}

std::vector<double> manufactured_rhs(const PolygonalMesh& mesh, const DofMap& dofs) {
  return assemble_rhs(mesh, &ManufacturedProblem::forcing, dofs);
}

}  // namespace mfd
