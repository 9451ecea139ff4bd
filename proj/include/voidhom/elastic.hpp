#pragma once

#include <memory>
#include <vector>

#include "voidhom/densities.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/geom.hpp"
#include "voidhom/grid.hpp"

namespace voidhom {

// Conforming P1 mesh over the raster cells of a GridDomain: nodes at cell
// corners, two triangles per cell with a uniform diagonal direction (so a
// spacing/2 mesh refines a spacing mesh).  Nodes touching a collar cell are
// constrained to the boundary datum.
struct FemMesh {
  std::shared_ptr<const GridDomain> domain;
  int corners_x = 0;  // nx + 1
  int corners_y = 0;

  std::vector<int32_t> node_of_corner;  // corners_x * corners_y, -1 if unused
  std::vector<IVec2> corner_of_node;
  std::vector<uint8_t> constrained;  // per node
  std::vector<int32_t> tri_nodes;    // 3 node ids per triangle
  std::vector<Vec2> tri_centroid;
  double tri_area = 0.0;  // spacing^2 / 2, uniform

  int node_count() const { return int(corner_of_node.size()); }
  int triangle_count() const { return int(tri_nodes.size() / 3); }
  Vec2 node_position(int node) const;
};

FemMesh build_mesh(std::shared_ptr<const GridDomain> domain);

struct BulkCellResult {
  double raw_energy = 0.0;  // integral of f at the discrete minimizer
  double normalized = 0.0;  // raw / continuum cell area (pi rho^2 disc, 4 rho^2 square)
  double raster_area = 0.0;
  int dof = 0;
  int iterations = 0;
  double rel_residual = 0.0;
  // Nodal minimizer (1 or 2 components per node, mesh node order) for field
  // export; rebuild the mesh with build_mesh(domain) to interpret it.
  bool scalar_field = false;
  std::vector<double> displacement;
};

// Integral of f over the raster for the exact affine field xi (y - x)
// (centroid quadrature); an upper bound for the minimum below.
double datum_energy(const BulkDensity& f, const GridDomain& domain, const Mat2& xi);

// Minimum of the integral of f(y, grad u) over P1 fields that equal the
// affine datum xi (y - x) on the collar.  Requires f.quadratic_coeff (the
// minimization runs on the quadratic model a(y) |sym grad u|^2, or
// a(y) |grad u|^2 of the scalar component in scalar mode); the reported
// energy re-evaluates f itself at the minimizer.  Matrix-free Jacobi
// preconditioned conjugate gradients, relative residual 1e-10, iteration cap
// 50 * sqrt(dof).
BulkCellResult solve_bulk_cell(const BulkDensity& f, std::shared_ptr<const GridDomain> domain,
                               Vec2 x, const Mat2& xi);

}  // namespace voidhom
