#pragma once

#include "voidhom/densities.hpp"
#include "voidhom/geom.hpp"
#include "voidhom/grid.hpp"

namespace voidhom {

// Surface density with the spatial argument frozen at x (the relaxation
// formulas are local in x; only the normal dependence survives).
SurfaceDensity freeze_surface(const SurfaceDensity& g, Vec2 x);

// Bulk density frozen at x; requires a quadratic coefficient there.
BulkDensity freeze_bulk(const BulkDensity& f, Vec2 x);

// Relaxed (BV-elliptic) envelope of g at (x, nu): the minimal perimeter
// energy over interfaces pinned to the flat one through the center of the
// unit ball, normalized by the diameter.  resolution = cells per unit radius
// (>= 16).  For convex one-homogeneous integrands this reproduces g itself.
double gbv_envelope(const SurfaceDensity& g, Vec2 x, Vec2 nu, int resolution,
                    const Stencil& stencil);

// Quasiconvex envelope of f at (x, xi).  Only densities declared convex in
// xi are supported, where the envelope is f itself; anything else throws
// UnsupportedDensity.
double fqc_envelope(const BulkDensity& f, Vec2 x, const Mat2& xi);

// FEM cross-check of fqc_envelope: minimizes the frozen density over the
// unit square with affine datum.  resolution = cells per unit side (>= 32).
// For convex densities this must reproduce f(x, xi) up to solver tolerance.
double fqc_crosscheck(const BulkDensity& f, Vec2 x, const Mat2& xi, int resolution);

}  // namespace voidhom
