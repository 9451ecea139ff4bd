#include "voidhom/grid.hpp"

#include <algorithm>
#include <cmath>

namespace voidhom {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Allowance for capacity quantization and raster boundary effects, folded
// into tau_stencil on top of the analytic direction error.
constexpr double kCalibrationAllowance = 0.002;

bool is_jump_pair(Label a, Label b) {
  return (a == Label::SolidPlus && b == Label::SolidMinus) ||
         (a == Label::SolidMinus && b == Label::SolidPlus);
}

// Dense least squares with nonnegativity (Lawson-Hanson), sized for the
// 8-direction stencil systems.
std::vector<double> nnls(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
  const int m = int(A.size());
  const int n = m > 0 ? int(A[0].size()) : 0;
  std::vector<double> x(n, 0.0);
  std::vector<char> passive(n, 0);
  auto residual_grad = [&](std::vector<double>& w) {
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += A[i][j] * x[j];
      r[i] = b[i] - ax;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += A[i][j] * r[i];
      w[j] = s;
    }
  };
  auto solve_passive = [&](std::vector<double>& z) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    const int k = int(idx.size());
    std::vector<std::vector<double>> G(k, std::vector<double>(k + 1, 0.0));
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += A[i][idx[a]] * A[i][idx[c]];
        G[a][c] = s;
      }
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += A[i][idx[a]] * b[i];
      G[a][k] = s;
    }
    for (int col = 0; col < k; ++col) {
      int piv = col;
      for (int r = col + 1; r < k; ++r)
        if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
      std::swap(G[col], G[piv]);
      double d = G[col][col];
      if (std::abs(d) < 1e-14) d = (d < 0 ? -1e-14 : 1e-14);
      for (int r = 0; r < k; ++r) {
        if (r == col) continue;
        double f = G[r][col] / d;
        for (int c = col; c <= k; ++c) G[r][c] -= f * G[col][c];
      }
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int a = 0; a < k; ++a) {
      double d = G[a][a];
      z[idx[a]] = std::abs(d) < 1e-14 ? 0.0 : G[a][k] / d;
    }
  };

  const double tol = 1e-12;
  std::vector<double> w(n), z(n);
  for (int outer = 0; outer < 4 * n + 8; ++outer) {
    residual_grad(w);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = 1;
    for (int inner = 0; inner < 4 * n + 8; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z[j] <= tol) feasible = false;
      if (feasible) {
        for (int j = 0; j < n; ++j) x[j] = passive[j] ? z[j] : 0.0;
        break;
      }
      double step = 1.0;
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= tol) {
          double denom = x[j] - z[j];
          if (denom > 0) step = std::min(step, x[j] / denom);
        }
      }
      for (int j = 0; j < n; ++j) {
        if (passive[j]) {
          x[j] += step * (z[j] - x[j]);
          if (x[j] <= tol) {
            x[j] = 0.0;
            passive[j] = 0;
          }
        }
      }
    }
  }
  return x;
}

}  // namespace

double GridDomain::area() const {
  return shape == Shape::Disc ? kPi * rho * rho : 4.0 * rho * rho;
}

GridDomain build_grid(Shape shape, Vec2 center, double rho, double spacing,
                      double collar_fraction) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw GridError("degenerate rho");
  if (!(spacing > 0.0) || spacing > rho / 16.0 + 1e-15) {
    throw GridError("resolution too coarse: spacing must be <= rho/16");
  }
  if (!(collar_fraction > 0.0) || !(collar_fraction < 0.5)) {
    throw GridError("collar_fraction must lie in (0, 1/2)");
  }
  GridDomain d;
  d.shape = shape;
  d.center = center;
  d.rho = rho;
  d.spacing = spacing;
  d.collar_fraction = collar_fraction;

  int n = int(std::ceil(2.0 * rho / spacing - 1e-12));
  n += n & 1;  // even: cell interfaces land on center + k*spacing
  d.nx = d.ny = n;
  d.origin = {center.x + (0.5 - 0.5 * n) * spacing, center.y + (0.5 - 0.5 * n) * spacing};
  d.cell_of_raster.assign(size_t(n) * n, -1);

  const double inner_disc = (1.0 - collar_fraction) * rho;
  const double inner_square = rho * (1.0 - 2.0 * collar_fraction);
  bool has_interior = false;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      Vec2 c{d.origin.x + ix * spacing, d.origin.y + iy * spacing};
      Vec2 r = c - center;
      bool inside = shape == Shape::Disc ? norm(r) < rho
                                         : std::max(std::abs(r.x), std::abs(r.y)) < rho;
      if (!inside) continue;
      bool in_collar = shape == Shape::Disc
                           ? norm(r) > inner_disc
                           : std::max(std::abs(r.x), std::abs(r.y)) > inner_square;
      d.cell_of_raster[size_t(iy) * n + ix] = int32_t(d.raster_of_cell.size());
      d.raster_of_cell.push_back({ix, iy});
      d.collar.push_back(in_collar ? 1 : 0);
      has_interior = has_interior || !in_collar;
    }
  }
  if (d.raster_of_cell.empty()) throw GridError("empty domain");
  if (std::find(d.collar.begin(), d.collar.end(), uint8_t(1)) == d.collar.end()) {
    throw GridError("collar band is empty");
  }
  if (!has_interior) throw GridError("no free cells inside the collar");
  return d;
}

LabelField halfspace_labels(const GridDomain& domain, Vec2 x, Vec2 nu) {
  Vec2 n = normalized(nu);
  Vec2 t = perp(n);
  LabelField f;
  f.domain = std::make_shared<GridDomain>(domain);
  f.labels.resize(size_t(domain.cell_count()));
  f.frozen.assign(domain.collar.begin(), domain.collar.end());
  for (int cell = 0; cell < domain.cell_count(); ++cell) {
    Vec2 r = domain.cell_center(cell) - x;
    double s = dot(r, n);
    bool in_side;
    if (s != 0.0) {
      in_side = s < 0.0;
    } else {
      double u = dot(r, t);
      in_side = u != 0.0 ? u < 0.0 : true;  // antisymmetric tie break
    }
    f.labels[size_t(cell)] = in_side ? Label::In : Label::Out;
  }
  return f;
}

LabelField thinlayer_labels(const GridDomain& domain, Vec2 x, Vec2 nu, double eps) {
  if (!(eps >= 2.0 * domain.spacing)) {
    throw GridError("thin layer must be at least two cells thick");
  }
  double collar_thickness = domain.shape == Shape::Disc
                                ? domain.collar_fraction * domain.rho
                                : 2.0 * domain.collar_fraction * domain.rho;
  if (!(eps < collar_thickness)) {
    throw GridError("thin layer half-width must stay below the collar thickness");
  }
  Vec2 n = normalized(nu);
  LabelField f;
  f.domain = std::make_shared<GridDomain>(domain);
  f.labels.resize(size_t(domain.cell_count()));
  f.frozen.assign(domain.collar.begin(), domain.collar.end());
  for (int cell = 0; cell < domain.cell_count(); ++cell) {
    double s = dot(domain.cell_center(cell) - x, n);
    Label l = std::abs(s) < eps ? Label::Void
                                : (s < 0.0 ? Label::SolidMinus : Label::SolidPlus);
    f.labels[size_t(cell)] = l;
  }
  return f;
}

std::vector<int> Stencil::representative_indices() const {
  std::vector<int> reps;
  for (int k = 0; k < int(offsets.size()); ++k) {
    IVec2 o = offsets[size_t(k)];
    if (o.y > 0 || (o.y == 0 && o.x > 0)) reps.push_back(k);
  }
  return reps;
}

Stencil make_stencil(int neighborhood) {
  std::vector<IVec2> reps;
  switch (neighborhood) {
    case 4:
      reps = {{1, 0}, {0, 1}};
      break;
    case 8:
      reps = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
      break;
    case 16:
      reps = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}, {2, 1}, {-1, 2}, {-2, 1}, {1, 2}};
      break;
    default:
      throw GridError("supported neighborhoods: 4, 8, 16");
  }
  // Cauchy-Crofton sector weights over the half circle of directions.
  std::vector<double> angle(reps.size());
  std::vector<int> order(reps.size());
  for (size_t k = 0; k < reps.size(); ++k) {
    double a = std::atan2(double(reps[k].y), double(reps[k].x));
    angle[k] = a < 0 ? a + kPi : (a >= kPi ? a - kPi : a);
    order[k] = int(k);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });
  std::vector<double> weight(reps.size());
  const int m = int(reps.size());
  for (int i = 0; i < m; ++i) {
    double prev = i > 0 ? angle[size_t(order[i - 1])] : angle[size_t(order[m - 1])] - kPi;
    double next = i + 1 < m ? angle[size_t(order[i + 1])] : angle[size_t(order[0])] + kPi;
    double sector = 0.5 * (next - prev);
    IVec2 o = reps[size_t(order[i])];
    weight[size_t(order[i])] = 0.5 * sector / std::hypot(double(o.x), double(o.y));
  }
  // Anchor: exact length for axis-aligned cuts.
  double axis = 0.0;
  for (size_t k = 0; k < reps.size(); ++k) axis += weight[k] * std::abs(double(reps[k].x));
  for (double& w : weight) w /= axis;

  Stencil s;
  s.neighborhood = neighborhood;
  for (size_t k = 0; k < reps.size(); ++k) {
    s.offsets.push_back(reps[k]);
    s.weights.push_back(weight[k]);
  }
  for (size_t k = 0; k < reps.size(); ++k) {
    s.offsets.push_back({-reps[k].x, -reps[k].y});
    s.weights.push_back(weight[k]);
  }
  return s;
}

double straight_cut_density(const Stencil& stencil, Vec2 nu) {
  Vec2 n = normalized(nu);
  double s = 0.0;
  for (int k : stencil.representative_indices()) {
    IVec2 o = stencil.offsets[size_t(k)];
    s += stencil.weights[size_t(k)] * std::abs(o.x * n.x + o.y * n.y);
  }
  return s;
}

double stencil_calibration(const Stencil& stencil, const std::vector<Vec2>& directions) {
  std::vector<Vec2> dirs = directions;
  if (dirs.empty()) {
    for (int k = 0; k < 64; ++k) {
      double a = kPi * k / 64.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    for (const IVec2& o : stencil.offsets) {
      dirs.push_back(normalized({double(o.x), double(o.y)}));
    }
  }
  if (dirs.size() < 8) throw GridError("calibration needs at least 8 test directions");
  double worst = 0.0;
  for (Vec2 nu : dirs) {
    worst = std::max(worst, std::abs(straight_cut_density(stencil, nu) - 1.0));
  }
  return worst + kCalibrationAllowance;
}

std::vector<double> crofton_coefficients(const Stencil& stencil, const SurfaceDensity& g,
                                         Vec2 x) {
  std::vector<int> reps = stencil.representative_indices();
  const int n = int(reps.size());
  std::vector<Vec2> normals(reps.size());
  for (int j = 0; j < n; ++j) {
    IVec2 o = stencil.offsets[size_t(reps[size_t(j)])];
    normals[size_t(j)] = normalized(perp({double(o.x), double(o.y)}));
  }
  std::vector<std::vector<double>> A(reps.size(), std::vector<double>(reps.size()));
  std::vector<double> b(reps.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      IVec2 o = stencil.offsets[size_t(reps[size_t(k)])];
      A[size_t(j)][size_t(k)] = stencil.weights[size_t(reps[size_t(k)])] *
                                std::abs(o.x * normals[size_t(j)].x + o.y * normals[size_t(j)].y);
    }
    b[size_t(j)] = g.evaluate(x, normals[size_t(j)]);
  }
  return nnls(A, b);
}

double large_penalty(const GridDomain& domain, double beta) {
  return 1e6 * beta * domain.rho / domain.spacing;
}

PerimeterEvaluator::PerimeterEvaluator(std::shared_ptr<const GridDomain> domain,
                                       const SurfaceDensity& g, const Stencil& stencil)
    : domain_(std::move(domain)), g_(g), stencil_(stencil) {
  reps_ = stencil_.representative_indices();
  large_ = large_penalty(*domain_, g_.beta);
  if (!g_.isotropic) {
    // Anisotropic densities are frozen at the domain center (must be constant
    // in x for this quadrature to be meaningful).
    coeff_ = crofton_coefficients(stencil_, g_, domain_->center);
    rep_slot_.assign(stencil_.offsets.size(), -1);
    for (int slot = 0; slot < int(reps_.size()); ++slot) {
      int rep = reps_[size_t(slot)];
      rep_slot_[size_t(rep)] = slot;
      IVec2 o = stencil_.offsets[size_t(rep)];
      // The negated offset shares the slot (same unordered direction).
      for (size_t k = 0; k < stencil_.offsets.size(); ++k) {
        if (stencil_.offsets[k].x == -o.x && stencil_.offsets[k].y == -o.y) {
          rep_slot_[k] = slot;
        }
      }
    }
  }
}

double PerimeterEvaluator::edge_weight(int cell, int k) const {
  const GridDomain& d = *domain_;
  IVec2 o = stencil_.offsets[size_t(k)];
  double w = stencil_.weights[size_t(k)] * d.spacing;
  if (!g_.isotropic) return w * coeff_[size_t(rep_slot_[size_t(k)])];
  Vec2 ca = d.cell_center(cell);
  Vec2 mid{ca.x + 0.5 * o.x * d.spacing, ca.y + 0.5 * o.y * d.spacing};
  Vec2 en = normalized(perp({double(o.x), double(o.y)}));
  return w * g_.evaluate(mid, en);
}

double PerimeterEvaluator::pair_cost(Label a, Label b, double weight) const {
  if (a == b) return 0.0;
  if (is_jump_pair(a, b)) return large_;
  return weight;
}

double PerimeterEvaluator::total(const LabelField& labels) const {
  const GridDomain& d = *domain_;
  double sum = 0.0;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    Label la = labels.labels[size_t(cell)];
    for (int k : reps_) {
      IVec2 o = stencil_.offsets[size_t(k)];
      int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
      if (nb < 0) continue;
      Label lb = labels.labels[size_t(nb)];
      if (la == lb) continue;
      sum += pair_cost(la, lb, edge_weight(cell, k));
    }
  }
  return sum;
}

double PerimeterEvaluator::flip_delta(const LabelField& labels, int cell, Label to) const {
  const GridDomain& d = *domain_;
  IVec2 rc = d.raster_of_cell[size_t(cell)];
  Label from = labels.labels[size_t(cell)];
  double delta = 0.0;
  for (size_t k = 0; k < stencil_.offsets.size(); ++k) {
    IVec2 o = stencil_.offsets[k];
    int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
    if (nb < 0) continue;
    Label lb = labels.labels[size_t(nb)];
    double w = edge_weight(cell, int(k));
    delta += pair_cost(to, lb, w) - pair_cost(from, lb, w);
  }
  return delta;
}

double perimeter_energy(const LabelField& labels, const SurfaceDensity& g,
                        const Stencil& stencil) {
  return PerimeterEvaluator(labels.domain, g, stencil).total(labels);
}

double flip_delta(const LabelField& labels, const SurfaceDensity& g, const Stencil& stencil,
                  int cell, Label to) {
  return PerimeterEvaluator(labels.domain, g, stencil).flip_delta(labels, cell, to);
}

}  // namespace voidhom
