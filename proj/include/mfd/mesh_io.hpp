#pragma once

#include <iosfwd>

#include "mfd/mesh.hpp"

namespace mfd {

/// Plain-text mesh format:
///   vertices N edges M cells K
///   id x y boundary_flag kind        (N lines; kind 0/1/2)
///   id v0 v1                         (M lines)
///   id n v0 ... v(n-1)               (K lines)
void write_mesh(const PolygonalMesh& mesh, std::ostream& out);

/// Parses and validates the format above; derived geometry (lengths, areas,
/// centers, diameters) is recomputed, and the stored edge list and boundary
/// flags are checked against the recomputed mesh.
PolygonalMesh read_mesh(std::istream& in);

}  // namespace mfd
