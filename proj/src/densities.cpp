#include "voidhom/densities.hpp"

#include <cmath>

namespace voidhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

double frac(double t) { return t - std::floor(t); }

// Two-phase layer profile: first half period low, second half high.
double layer_value(double low, double high, double t) { return frac(t) < 0.5 ? low : high; }

void check_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha)) {
    throw UnsupportedDensity("density bounds must satisfy 0 < alpha < beta");
  }
}

}  // namespace

ValidationReport validate_bulk(const BulkDensity& f, const std::vector<Vec2>& sample_x,
                               const std::vector<Mat2>& sample_xi) {
  ValidationReport rep;
  if (f.p != 2) {
    rep.violations.push_back({"p", {}, double(f.p), 2.0});
    return rep;
  }
  if (!(f.alpha > 0.0) || !(f.beta > f.alpha)) {
    rep.violations.push_back({"bounds", {}, f.alpha, f.beta});
  }
  const double tol = 1e-9;
  for (Vec2 x : sample_x) {
    double at_zero = f.evaluate(x, Mat2::zero());
    if (std::abs(at_zero) > tol) {
      rep.violations.push_back({"f1", x, at_zero, 0.0});
    }
    for (const Mat2& xi : sample_xi) {
      double v = f.evaluate(x, xi);
      double strain = f.scalar_mode ? dot(last_row(xi), last_row(xi)) : sym_norm_sq(xi);
      if (v < f.alpha * strain - tol * (1.0 + strain)) {
        rep.violations.push_back({"f2", x, v, f.alpha * strain});
      }
      if (v > f.beta * (1.0 + strain) + tol * (1.0 + strain)) {
        rep.violations.push_back({"f3", x, v, f.beta * (1.0 + strain)});
      }
      if (f.scalar_mode) {
        Mat2 perturbed = xi;
        perturbed.m[0][0] += 0.7;
        perturbed.m[0][1] -= 1.3;
        double pv = f.evaluate(x, perturbed);
        if (std::abs(pv - v) > tol * (1.0 + std::abs(v))) {
          rep.violations.push_back({"scalar", x, pv, v});
        }
      } else {
        double sv = f.evaluate(x, sym(xi));
        if (std::abs(sv - v) > tol * (1.0 + std::abs(v))) {
          rep.violations.push_back({"sym", x, sv, v});
        }
      }
    }
  }
  return rep;
}

ValidationReport validate_surface(const SurfaceDensity& g, const std::vector<Vec2>& sample_x,
                                  const std::vector<Vec2>& sample_nu) {
  ValidationReport rep;
  if (!(g.alpha > 0.0) || !(g.beta > g.alpha)) {
    rep.violations.push_back({"bounds", {}, g.alpha, g.beta});
  }
  const double tol = 1e-9;
  for (Vec2 x : sample_x) {
    for (Vec2 nu : sample_nu) {
      Vec2 n = normalized(nu);
      double v = g.evaluate(x, n);
      double w = g.evaluate(x, n * -1.0);
      if (std::abs(v - w) > tol * (1.0 + std::abs(v))) {
        rep.violations.push_back({"g1", x, v, w});
      }
      if (v < g.alpha - tol) {
        rep.violations.push_back({"g2", x, v, g.alpha});
      }
      if (v > g.beta + tol) {
        rep.violations.push_back({"g3", x, v, g.beta});
      }
    }
  }
  return rep;
}

BulkDensity make_laminate_bulk(double a_low, double a_high, Vec2 layer_normal, double period,
                               bool scalar_mode) {
  check_alpha_beta(std::min(a_low, a_high), std::max(a_low, a_high) + 1e-12);
  if (!(period > 0.0)) throw UnsupportedDensity("laminate period must be positive");
  Vec2 n = normalized(layer_normal);
  auto coeff = [=](Vec2 x) { return layer_value(a_low, a_high, dot(x, n) / period); };
  BulkDensity f;
  f.scalar_mode = scalar_mode;
  f.evaluate = [coeff, scalar_mode](Vec2 x, const Mat2& xi) {
    double strain = scalar_mode ? dot(last_row(xi), last_row(xi)) : sym_norm_sq(xi);
    return coeff(x) * strain;
  };
  f.alpha = std::min(a_low, a_high);
  // In scalar mode the natural bound is a_high |q|^2 for the scalar gradient
  // q; against the |sym xi|^2 reference of the shared growth report this
  // needs a factor 2, since |q|^2 <= 2 |sym xi|^2 for antiplane matrices.
  f.beta = scalar_mode ? 2.0 * std::max(a_low, a_high) : std::max(a_low, a_high);
  f.convex_in_xi = true;
  f.quadratic_coeff = coeff;
  f.period = period;
  return f;
}

BulkDensity make_quadratic_bulk(double a, bool scalar_mode) {
  if (!(a > 0.0)) throw UnsupportedDensity("quadratic coefficient must be positive");
  BulkDensity f;
  f.scalar_mode = scalar_mode;
  f.evaluate = [a, scalar_mode](Vec2, const Mat2& xi) {
    double strain = scalar_mode ? dot(last_row(xi), last_row(xi)) : sym_norm_sq(xi);
    return a * strain;
  };
  f.alpha = a;
  f.beta = scalar_mode ? 2.0 * a : a * (1.0 + 1e-9);
  f.convex_in_xi = true;
  f.quadratic_coeff = [a](Vec2) { return a; };
  return f;
}

SurfaceDensity make_stripe_surface(double g_low, double g_high, Vec2 layer_normal, double period) {
  check_alpha_beta(std::min(g_low, g_high), std::max(g_low, g_high));
  if (!(period > 0.0)) throw UnsupportedDensity("stripe period must be positive");
  Vec2 n = normalized(layer_normal);
  SurfaceDensity g;
  g.evaluate = [=](Vec2 x, Vec2) { return layer_value(g_low, g_high, dot(x, n) / period); };
  g.alpha = std::min(g_low, g_high);
  g.beta = std::max(g_low, g_high);
  g.continuous_in_x = false;
  g.isotropic = true;
  g.period = period;
  return g;
}

SurfaceDensity make_counterexample_surface(double line_x, double cheap, double expensive,
                                           double line_halfwidth) {
  check_alpha_beta(cheap, expensive);
  if (!(line_halfwidth > 0.0)) throw UnsupportedDensity("line halfwidth must be positive");
  SurfaceDensity g;
  g.evaluate = [=](Vec2 x, Vec2) {
    return std::abs(x.x - line_x) <= line_halfwidth ? cheap : expensive;
  };
  g.alpha = cheap;
  g.beta = expensive;
  g.continuous_in_x = false;
  g.isotropic = true;
  return g;
}

SurfaceDensity make_constant_surface(double value) {
  if (!(value > 0.0)) throw UnsupportedDensity("constant surface density must be positive");
  SurfaceDensity g;
  g.evaluate = [value](Vec2, Vec2) { return value; };
  g.alpha = value;
  g.beta = value * (1.0 + 1e-9);
  g.continuous_in_x = true;
  g.isotropic = true;
  return g;
}

SurfaceDensity make_sin_surface(double base, double amplitude, double period) {
  if (!(amplitude > 0.0) || !(amplitude < base)) {
    throw UnsupportedDensity("sin surface density needs 0 < amplitude < base");
  }
  if (!(period > 0.0)) throw UnsupportedDensity("sin period must be positive");
  SurfaceDensity g;
  g.evaluate = [=](Vec2 x, Vec2) { return base + amplitude * std::sin(2.0 * kPi * x.x / period); };
  g.alpha = base - amplitude;
  g.beta = base + amplitude;
  g.continuous_in_x = true;
  g.isotropic = true;
  g.period = period;
  return g;
}

SurfaceDensity make_aniso_surface(std::function<double(Vec2)> g_of_nu, double alpha, double beta) {
  check_alpha_beta(alpha, beta);
  SurfaceDensity g;
  g.evaluate = [fn = std::move(g_of_nu)](Vec2, Vec2 nu) { return fn(nu); };
  g.alpha = alpha;
  g.beta = beta;
  g.continuous_in_x = true;
  g.isotropic = false;
  return g;
}

SurfaceDensity scale_surface(const SurfaceDensity& g, double eps) {
  if (!(eps > 0.0)) throw UnsupportedDensity("density scale must be positive");
  SurfaceDensity s = g;
  s.evaluate = [inner = g.evaluate, eps](Vec2 x, Vec2 nu) { return inner(x / eps, nu); };
  if (g.period) s.period = *g.period * eps;
  return s;
}

}  // namespace voidhom
