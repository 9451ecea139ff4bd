#pragma once

#include <cstdint>
#include <memory>

#include "voidhom/densities.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/grid.hpp"

namespace voidhom {

struct SurfaceCellResult {
  double raw_energy = 0.0;  // perimeter energy of the optimal labeling
  double normalized = 0.0;  // raw / (2 rho)
  LabelField labels;
  int64_t flow = 0;  // quantized optimum (certificate)
};

// Minimum perimeter energy over two-label fields that agree with `datum` on
// its frozen cells.  Exact min-cut reduction: one network node per free cell,
// frozen neighbors fold into terminal capacities, frozen-frozen edges are a
// constant.  The quantized flow must reproduce the quantized cost of the
// returned labeling exactly, and the max-flow certificate must close;
// violations throw SolverError.
SurfaceCellResult minimize_two_label(const SurfaceDensity& g, const LabelField& datum,
                                     const Stencil& stencil);

// Void-surface cell value: half-space datum with normal nu at x, collar
// frozen.  normalized = raw / (2 rho).  Square domains support axis-aligned
// normals only (their boundary datum is otherwise inconsistent with the
// raster collar).
SurfaceCellResult solve_void_cell(const SurfaceDensity& g,
                                  std::shared_ptr<const GridDomain> domain, Vec2 x, Vec2 nu,
                                  const Stencil& stencil);

}  // namespace voidhom
