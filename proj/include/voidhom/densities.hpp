#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "voidhom/geom.hpp"

namespace voidhom {

// Thrown when a density lies outside what the solvers support (p != 2,
// non-quadratic bulk energies handed to the FEM, x-varying anisotropic
// surface densities, ...).
struct UnsupportedDensity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Volume integrand f(x, xi) with p-growth in |sym xi| (p = 2 throughout).
// In scalar (antiplane) mode the integrand depends on xi only through its
// last row, which plays the role of the scalar gradient.
struct BulkDensity {
  std::function<double(Vec2, const Mat2&)> evaluate;
  double alpha = 1.0;
  double beta = 2.0;
  int p = 2;
  bool convex_in_xi = false;
  bool scalar_mode = false;
  // Set for the quadratic family f = a(y) |strain|^2; the cell solver
  // requires it.
  std::function<double(Vec2)> quadratic_coeff;
  // Period of x-dependence when the density is periodic (both axes).
  std::optional<double> period;
};

// Surface integrand g(x, nu) on unit normals, even in nu, with
// 0 < alpha <= g <= beta.  `isotropic` marks densities that ignore nu;
// anisotropic densities must be constant in x (see perimeter_energy).
struct SurfaceDensity {
  std::function<double(Vec2, Vec2)> evaluate;
  double alpha = 1.0;
  double beta = 2.0;
  bool continuous_in_x = true;
  bool isotropic = true;
  std::optional<double> period;
};

struct ValidationReport {
  struct Violation {
    std::string condition;  // "f1", "f2", "f3", "sym", "g1", "g2", "g3", ...
    Vec2 x;
    double value = 0.0;
    double bound = 0.0;
  };
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks (f1) f(x,0)=0, (f2) alpha|strain|^p <= f, (f3) f <= beta(1+|strain|^p)
// on the sample points, plus the structural invariance: vector-mode densities
// must satisfy f(x,xi) = f(x,sym xi); scalar-mode densities must ignore every
// entry outside the last row.
ValidationReport validate_bulk(const BulkDensity& f, const std::vector<Vec2>& sample_x,
                               const std::vector<Mat2>& sample_xi);

// Checks (g1) g(x,nu)=g(x,-nu), (g2) alpha <= g, (g3) g <= beta on the samples.
ValidationReport validate_surface(const SurfaceDensity& g, const std::vector<Vec2>& sample_x,
                                  const std::vector<Vec2>& sample_nu);

// f(x, xi) = a(<x,n>/period) |strain|^2 with a = a_low on the first half
// period and a_high on the second.  Layer interfaces sit at multiples of
// period/2 along n.
BulkDensity make_laminate_bulk(double a_low, double a_high, Vec2 layer_normal, double period,
                               bool scalar_mode = false);

// Constant-coefficient quadratic bulk density a |strain|^2.
BulkDensity make_quadratic_bulk(double a, bool scalar_mode = false);

// g(x) = g_low on the first half period along n, g_high on the second.
SurfaceDensity make_stripe_surface(double g_low, double g_high, Vec2 layer_normal, double period);

// g(x) = cheap on the band |x1 - line_x| <= line_halfwidth, expensive
// elsewhere; discontinuous in x.
SurfaceDensity make_counterexample_surface(double line_x, double cheap, double expensive,
                                           double line_halfwidth);

SurfaceDensity make_constant_surface(double value);

// g(x) = base + amplitude * sin(2 pi x1 / period); requires amplitude < base.
SurfaceDensity make_sin_surface(double base, double amplitude, double period);

// Anisotropic density constant in x.  alpha/beta must bracket the evaluated
// range over unit normals.
SurfaceDensity make_aniso_surface(std::function<double(Vec2)> g_of_nu, double alpha, double beta);

// Density rescaled to x/eps (the homogenization family g_eps = g(./eps)).
SurfaceDensity scale_surface(const SurfaceDensity& g, double eps);

}  // namespace voidhom
