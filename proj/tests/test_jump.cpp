#include <algorithm>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "voidhom/densities.hpp"
#include "voidhom/grid.hpp"
#include "voidhom/jump.hpp"
#include "voidhom/oracles.hpp"
#include "voidhom/surface.hpp"

using namespace voidhom;

namespace {

std::shared_ptr<const GridDomain> make_domain(double rho, double spacing,
                                              double collar = 0.1) {
  return std::make_shared<const GridDomain>(
      build_grid(Shape::Disc, {0.0, 0.0}, rho, spacing, collar));
}

bool separation_ok(const LabelField& f, const Stencil& st) {
  const GridDomain& d = *f.domain;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    Label a = f.labels[size_t(cell)];
    if (a != Label::SolidMinus && a != Label::SolidPlus) continue;
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    for (IVec2 o : st.offsets) {
      int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
      if (nb < 0) continue;
      Label b = f.labels[size_t(nb)];
      if ((a == Label::SolidMinus && b == Label::SolidPlus) ||
          (a == Label::SolidPlus && b == Label::SolidMinus)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("jump") {
  TEST_CASE("matches exhaustive three-label enumeration on a free patch") {
    auto d = make_domain(1.0, 1.0 / 16.0, 0.3);  // collar wide enough for eps = 2h
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_stripe_surface(1.0, 2.0, {0.0, 1.0}, 0.5);

    // eps = 2h: void band occupies raster rows 14..17, so a patch over rows
    // 13..15 straddles the lower face where the optimizer has real choices.
    LabelField base = thinlayer_labels(*d, {0, 0}, {0.0, 1.0}, 2.0 / 16.0);
    std::vector<int> patch;
    for (int cell = 0; cell < d->cell_count(); ++cell) {
      IVec2 rc = d->raster_of_cell[size_t(cell)];
      bool inside = rc.x >= 8 && rc.x < 11 && rc.y >= 13 && rc.y < 16;
      if (inside && !base.frozen[size_t(cell)]) {
        patch.push_back(cell);
      } else {
        base.frozen[size_t(cell)] = 1;
      }
    }
    REQUIRE(patch.size() == 9);

    JumpCellResult solved = minimize_three_label(g, base, st);
    OracleLabeling oracle = oracle_exhaustive_labels(
        base, g, st, patch, {Label::SolidMinus, Label::Void, Label::SolidPlus});
    CHECK(solved.raw_energy == doctest::Approx(oracle.energy).epsilon(1e-6));
    CHECK(solved.optimizer_flag == "exact");
    CHECK(separation_ok(solved.labels, st));
  }

  TEST_CASE("matches the column-band dynamic program for a uniform density") {
    auto d = make_domain(1.0, 1.0 / 16.0, 0.3);  // collar wide enough for eps = 2h
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_constant_surface(1.0);
    LabelField base = thinlayer_labels(*d, {0, 0}, {0.0, 1.0}, 2.0 / 16.0);

    JumpCellResult solved = minimize_three_label(g, base, st);
    // Thresholds confined to rows 11..21 still bracket the datum faces
    // (rows 14 and 18) with three rows of slack on either side.
    double dp = oracle_band_cut(base, g, st, 11, 20, Label::SolidMinus, Label::Void,
                                Label::SolidPlus);
    CHECK(dp >= solved.raw_energy - 1e-9);
    CHECK(solved.raw_energy == doctest::Approx(dp).epsilon(1e-9));
    // Two flat faces across the diameter: raw / (2 rho) sits near 2.
    CHECK(solved.raw_energy / 2.0 == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("optimal layer pays both faces of the void") {
    auto d = make_domain(1.0, 1.0 / 64.0);
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_constant_surface(1.0);
    JumpCellResult jump = solve_jump_cell(g, d, {0, 0}, {1.0, 0.0}, 2.0 / 64.0, st);
    SurfaceCellResult voidc = solve_void_cell(g, d, {0, 0}, {1.0, 0.0}, st);
    CHECK(jump.normalized >= 2.0 * voidc.normalized - 0.01);
    CHECK(jump.normalized == doctest::Approx(2.0 * voidc.normalized).epsilon(0.005));
    CHECK(separation_ok(jump.labels, st));
  }

  TEST_CASE("solutions honor the separation constraint and the frozen datum") {
    auto d = make_domain(1.0, 1.0 / 32.0);
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_stripe_surface(1.0, 2.0, {1.0, 0.0}, 0.25);
    JumpCellResult r = solve_jump_cell(g, d, {0, 0}, {0.0, 1.0}, 3.0 / 32.0, st);
    CHECK(separation_ok(r.labels, st));
    LabelField datum = thinlayer_labels(*d, {0, 0}, {0.0, 1.0}, 3.0 / 32.0);
    for (int cell = 0; cell < d->cell_count(); ++cell) {
      if (datum.frozen[size_t(cell)]) {
        CHECK(r.labels.labels[size_t(cell)] == datum.labels[size_t(cell)]);
      }
    }
  }

  TEST_CASE("shrinking the layer changes the value by at most the datum swap cost") {
    auto d = make_domain(1.0, 1.0 / 64.0);
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_sin_surface(1.5, 0.5, 0.25);
    const double eps_small = 3.0 / 64.0, eps_large = 5.0 / 64.0;
    JumpCellResult small = solve_jump_cell(g, d, {0, 0}, {1.0, 0.0}, eps_small, st);
    JumpCellResult large = solve_jump_cell(g, d, {0, 0}, {1.0, 0.0}, eps_large, st);

    // The larger optimum's free labels over the smaller datum's collar are
    // admissible for the smaller problem, so they bound it from above.
    LabelField hybrid = thinlayer_labels(*d, {0, 0}, {1.0, 0.0}, eps_small);
    for (int cell = 0; cell < d->cell_count(); ++cell) {
      if (!hybrid.frozen[size_t(cell)]) {
        hybrid.labels[size_t(cell)] = large.labels.labels[size_t(cell)];
      }
    }
    double swap_bound = perimeter_energy(hybrid, g, st) / (2.0 * d->rho);
    CHECK(small.normalized <= swap_bound + 1e-9);
    CHECK(swap_bound <= large.normalized + 1.0);  // collar mismatch stays local
  }

  TEST_CASE("layer thickness bounds are enforced") {
    auto d = make_domain(1.0, 1.0 / 32.0);
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_constant_surface(1.0);
    CHECK_THROWS_AS((void)solve_jump_cell(g, d, {0, 0}, {1.0, 0.0}, 1.0 / 32.0, st), GridError);
    CHECK_THROWS_AS((void)solve_jump_cell(g, d, {0, 0}, {1.0, 0.0}, 0.5, st), GridError);
  }

  TEST_CASE("square domains reject oblique normals") {
    auto sq = std::make_shared<const GridDomain>(
        build_grid(Shape::Square, {0.0, 0.0}, 1.0, 1.0 / 32.0, 0.1));
    Stencil st = make_stencil(16);
    SurfaceDensity g = make_constant_surface(1.0);
    double s = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS((void)solve_jump_cell(g, sq, {0, 0}, {s, s}, 3.0 / 32.0, st),
                    UnsupportedDensity);
    JumpCellResult ok = solve_jump_cell(g, sq, {0, 0}, {0.0, 1.0}, 3.0 / 32.0, st);
    CHECK(ok.normalized > 0.0);
  }
}
