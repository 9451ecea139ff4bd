#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "voidhom/densities.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/grid.hpp"

namespace voidhom {

struct JumpCellResult {
  double raw_energy = 0.0;  // perimeter energy of the optimal labeling
  double normalized = 0.0;  // raw / (2 rho)
  LabelField labels;
  int64_t flow = 0;
  // The three-label pairwise cost {0, w, large} is convex in the label
  // distance, so the layered two-level cut is an exact minimizer (no move
  // heuristics involved).
  std::string optimizer_flag = "exact";
};

// Minimum perimeter energy over {SolidMinus, Void, SolidPlus} fields agreeing
// with `datum` on frozen cells.  Exact layered (two binary levels per cell)
// min-cut; the quantized flow must replay exactly on the returned labeling
// and the result must be free of SolidPlus|SolidMinus contacts.
JumpCellResult minimize_three_label(const SurfaceDensity& g, const LabelField& datum,
                                    const Stencil& stencil);

// Jump cell value: thin-layer datum of half-width eps around the plane
// through x with normal nu, collar frozen.  normalized = raw / (2 rho).
JumpCellResult solve_jump_cell(const SurfaceDensity& g, std::shared_ptr<const GridDomain> domain,
                               Vec2 x, Vec2 nu, double eps, const Stencil& stencil);

}  // namespace voidhom
