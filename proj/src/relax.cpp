#include "voidhom/relax.hpp"

#include <memory>

#include "voidhom/elastic.hpp"
#include "voidhom/surface.hpp"

namespace voidhom {

SurfaceDensity freeze_surface(const SurfaceDensity& g, Vec2 x) {
  SurfaceDensity frozen = g;
  frozen.evaluate = [eval = g.evaluate, x](Vec2, Vec2 nu) { return eval(x, nu); };
  frozen.continuous_in_x = true;
  frozen.period.reset();
  return frozen;
}

BulkDensity freeze_bulk(const BulkDensity& f, Vec2 x) {
  if (!f.quadratic_coeff)
    throw UnsupportedDensity("freeze_bulk: density has no quadratic coefficient");
  BulkDensity frozen = f;
  frozen.evaluate = [eval = f.evaluate, x](Vec2, const Mat2& xi) { return eval(x, xi); };
  frozen.quadratic_coeff = [coeff = f.quadratic_coeff, x](Vec2) { return coeff(x); };
  frozen.period.reset();
  return frozen;
}

double gbv_envelope(const SurfaceDensity& g, Vec2 x, Vec2 nu, int resolution,
                    const Stencil& stencil) {
  if (resolution < 16)
    throw UnsupportedDensity("gbv_envelope: resolution below 16 cells per radius");
  SurfaceDensity frozen = freeze_surface(g, x);
  auto ball = std::make_shared<const GridDomain>(
      build_grid(Shape::Disc, Vec2{0.0, 0.0}, 1.0, 1.0 / resolution, 0.1));
  return solve_void_cell(frozen, ball, Vec2{0.0, 0.0}, nu, stencil).normalized;
}

double fqc_envelope(const BulkDensity& f, Vec2 x, const Mat2& xi) {
  if (!f.convex_in_xi)
    throw UnsupportedDensity("fqc_envelope: only convex-in-xi densities are supported");
  return f.evaluate(x, xi);
}

double fqc_crosscheck(const BulkDensity& f, Vec2 x, const Mat2& xi, int resolution) {
  if (!f.convex_in_xi)
    throw UnsupportedDensity("fqc_crosscheck: only convex-in-xi densities are supported");
  if (resolution < 32)
    throw UnsupportedDensity("fqc_crosscheck: resolution below 32 cells per side");
  BulkDensity frozen = freeze_bulk(f, x);
  auto square = std::make_shared<const GridDomain>(
      build_grid(Shape::Square, Vec2{0.0, 0.0}, 0.5, 1.0 / resolution, 0.1));
  return solve_bulk_cell(frozen, square, Vec2{0.0, 0.0}, xi).normalized;
}

}  // namespace voidhom
