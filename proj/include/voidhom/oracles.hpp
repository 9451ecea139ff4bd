#pragma once

#include <cstdint>
#include <vector>

#include "voidhom/grid.hpp"
#include "voidhom/network.hpp"

namespace voidhom {

// Reference optimizers for cross-checking the production solvers on small
// instances.  They share the energy definition (PerimeterEvaluator) but use
// deliberately different search strategies: subset enumeration, exhaustive
// labelings and restricted-class dynamic programs.

// Minimum s-t cut value by enumerating every source-side subset.
// Requires node_count <= 22.
int64_t oracle_min_cut_value(const FlowNetwork& net);

struct OracleLabeling {
  double energy = 0.0;
  std::vector<Label> labels;
};

// Exhaustive minimum over the labelings that assign any label from `palette`
// to each listed cell and keep the base labels elsewhere.  The search space
// (palette size ^ cells) must stay below ~2e6 configurations.
OracleLabeling oracle_exhaustive_labels(const LabelField& base, const SurfaceDensity& g,
                                        const Stencil& stencil, const std::vector<int>& cells,
                                        const std::vector<Label>& palette);

// Minimum energy over single-threshold columns: the free cells of raster
// column ix take `below` when iy < t(ix) and `above` otherwise, with
// t(ix) in [row_min, row_max + 1]; frozen cells keep their base labels.
// Dynamic program over columns, exact within this class for stencils spanning
// at most two columns.  The returned value is re-evaluated on the
// reconstructed labeling (and cross-checked against the DP accumulator).
double oracle_threshold_cut(const LabelField& base, const SurfaceDensity& g,
                            const Stencil& stencil, int row_min, int row_max, Label below,
                            Label above);

// Band variant for three-label problems: `lower` below a(ix), `middle` on
// [a(ix), b(ix)), `upper` above, with row_min <= a <= b <= row_max + 1.
double oracle_band_cut(const LabelField& base, const SurfaceDensity& g, const Stencil& stencil,
                       int row_min, int row_max, Label lower, Label middle, Label upper);

// Effective coefficients of a 1D two-phase laminate with volume fraction
// `theta` of phase a_low: a gradient across the layers sees the harmonic
// mean, a gradient along the layers the arithmetic mean.
struct LaminateEffective {
  double across = 0.0;
  double along = 0.0;
};
LaminateEffective laminate_effective(double a_low, double a_high, double theta = 0.5);

// Minimum of int_0^L a(t) |u'|^2 dt over u with u(0) = 0, u(L) = slope * L,
// for a coefficient that is constant on equal-width cells: the constant-flux
// closed form slope^2 * L^2 / sum(width_i / a_i).
double laminate_1d_energy(const std::vector<double>& cell_coeffs, double length, double slope);

}  // namespace voidhom
