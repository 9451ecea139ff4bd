#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "voidhom/densities.hpp"
#include "voidhom/geom.hpp"

namespace voidhom {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Shape { Disc, Square };

// Raster cover of a disc B_rho(center) or square of side 2*rho centered at
// `center`.  Cells are lattice squares of side `spacing`; cell centers sit on
// a half-offset lattice so that cell corners (and hence cell interfaces) land
// on center + integer multiples of spacing.  Cells are enumerated row-major.
struct GridDomain {
  Shape shape = Shape::Disc;
  Vec2 center;
  double rho = 0.0;       // radius (disc) or half side (square)
  double spacing = 0.0;
  double collar_fraction = 0.1;

  int nx = 0;  // raster extent in cells
  int ny = 0;
  Vec2 origin;  // position of the center of raster cell (0,0)

  std::vector<int32_t> cell_of_raster;  // nx*ny, -1 outside the domain
  std::vector<IVec2> raster_of_cell;    // per cell, its raster coordinates
  std::vector<uint8_t> collar;          // per cell, 1 if in the frozen collar band

  int cell_count() const { return int(raster_of_cell.size()); }

  int32_t cell_at(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
    return cell_of_raster[size_t(iy) * nx + ix];
  }

  Vec2 cell_center(int cell) const {
    IVec2 rc = raster_of_cell[size_t(cell)];
    return {origin.x + rc.x * spacing, origin.y + rc.y * spacing};
  }

  double area() const;  // continuum area of the covered shape
};

// rho > 0, spacing <= rho/16, 0 < collar_fraction < 1/2.  The collar is the
// band within collar_fraction * rho (disc) resp. collar_fraction * side
// (square) of the boundary; it is always nonempty.
GridDomain build_grid(Shape shape, Vec2 center, double rho, double spacing,
                      double collar_fraction = 0.1);

enum class Label : uint8_t {
  In = 0,          // solid of a two-label (void) problem
  Out = 1,         // void of a two-label problem
  SolidMinus = 2,  // u = 0 side of a jump problem
  SolidPlus = 3,   // u = e1 side of a jump problem
  Void = 4,
};

struct LabelField {
  std::shared_ptr<const GridDomain> domain;
  std::vector<Label> labels;   // per cell
  std::vector<uint8_t> frozen; // per cell, 1 = collar datum, not optimizable
};

// Half-space datum: In where <c - x, nu> < 0 (ties broken by <c - x, perp(nu)>
// so that nu -> -nu complements the labeling exactly).  Collar cells frozen.
LabelField halfspace_labels(const GridDomain& domain, Vec2 x, Vec2 nu);

// Thin-layer datum for jump cells: Void on |<c - x, nu>| < eps, SolidMinus on
// the negative side, SolidPlus on the positive side.  Requires
// 2*spacing <= eps < collar thickness.
LabelField thinlayer_labels(const GridDomain& domain, Vec2 x, Vec2 nu, double eps);

// Cut-metric stencil.  Offsets come in +/- pairs; `weights` are unit-grid
// Cauchy-Crofton sector weights (multiply by spacing for physical edge
// weights), normalized so axis-aligned cuts have zero calibration error.
struct Stencil {
  int neighborhood = 16;  // 4, 8 or 16
  std::vector<IVec2> offsets;
  std::vector<double> weights;

  // Offsets with (y > 0) or (y == 0 && x > 0); each unordered edge is visited
  // through exactly one representative.
  std::vector<int> representative_indices() const;
};

Stencil make_stencil(int neighborhood);

// Analytic discrete-vs-true length of a straight cut with normal `nu`, per
// unit length, for g = 1 (pure function of the stencil).
double straight_cut_density(const Stencil& stencil, Vec2 nu);

// Max relative length error over the direction fan (>= 8 directions required,
// defaults to a 64-direction fan plus the stencil's own worst cases), plus a
// pinned quantization allowance.  This is tau_stencil.
double stencil_calibration(const Stencil& stencil, const std::vector<Vec2>& directions = {});

// Per-direction nonnegative Crofton coefficients c_k with
// sum_k w_k |<o_k, nu>| c_k ~= g(nu) at the stencil normals; exact whenever
// g's Crofton measure is supported on the stencil directions (e.g. the
// l1 norm).  Used for anisotropic densities at a frozen x.
std::vector<double> crofton_coefficients(const Stencil& stencil, const SurfaceDensity& g, Vec2 x);

// Forbidden-adjacency penalty for SolidPlus|SolidMinus contact.
double large_penalty(const GridDomain& domain, double beta);

// Shared edge-cost model for every optimizer (graph solvers and reference
// oracles), so they minimize bit-identical objectives.  Isotropic densities
// pay weight * g(edge midpoint) per edge; anisotropic densities pay
// weight * c_k via crofton_coefficients frozen at the domain center (the
// density must be constant in x for that to be meaningful).
// SolidPlus|SolidMinus adjacency pays large_penalty per edge.
class PerimeterEvaluator {
 public:
  PerimeterEvaluator(std::shared_ptr<const GridDomain> domain, const SurfaceDensity& g,
                     const Stencil& stencil);

  const GridDomain& domain() const { return *domain_; }
  const Stencil& stencil() const { return stencil_; }
  const std::vector<int>& representatives() const { return reps_; }
  double large() const { return large_; }

  // Physical weight (stencil weight * spacing * charge) of the edge leaving
  // `cell` along stencil offset index k.  The neighbor must exist.
  double edge_weight(int cell, int k) const;

  // 0 for equal labels, large() for SolidPlus|SolidMinus, `weight` otherwise.
  double pair_cost(Label a, Label b, double weight) const;

  // Sum over unordered neighbor pairs, frozen-frozen edges included.
  double total(const LabelField& labels) const;

  // Signed energy change of relabeling one cell to `to`.
  double flip_delta(const LabelField& labels, int cell, Label to) const;

 private:
  std::shared_ptr<const GridDomain> domain_;
  SurfaceDensity g_;
  Stencil stencil_;
  std::vector<int> reps_;
  double large_ = 0.0;
  std::vector<double> coeff_;    // anisotropic: per representative slot
  std::vector<int> rep_slot_;    // stencil index -> representative slot
};

// Convenience wrappers constructing a PerimeterEvaluator per call.
double perimeter_energy(const LabelField& labels, const SurfaceDensity& g, const Stencil& stencil);

// Signed energy change of flipping one free cell to `to` (equals the
// perimeter_energy difference; used by locality tests).
double flip_delta(const LabelField& labels, const SurfaceDensity& g, const Stencil& stencil,
                  int cell, Label to);

}  // namespace voidhom
