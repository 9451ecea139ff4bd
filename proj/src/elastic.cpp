#include "voidhom/elastic.hpp"

#include <cmath>
#include <cstdint>

namespace voidhom {

Vec2 FemMesh::node_position(int node) const {
  IVec2 c = corner_of_node[size_t(node)];
  const GridDomain& d = *domain;
  return {d.origin.x + (c.x - 0.5) * d.spacing, d.origin.y + (c.y - 0.5) * d.spacing};
}

FemMesh build_mesh(std::shared_ptr<const GridDomain> domain) {
  const GridDomain& d = *domain;
  FemMesh m;
  m.domain = domain;
  m.corners_x = d.nx + 1;
  m.corners_y = d.ny + 1;
  m.tri_area = 0.5 * d.spacing * d.spacing;

  // Mark used / constrained corners from the cells they touch.
  std::vector<uint8_t> used(size_t(m.corners_x) * m.corners_y, 0);
  std::vector<uint8_t> pinned(size_t(m.corners_x) * m.corners_y, 0);
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    bool collar = d.collar[size_t(cell)] != 0;
    for (int dy = 0; dy <= 1; ++dy) {
      for (int dx = 0; dx <= 1; ++dx) {
        size_t corner = size_t(rc.y + dy) * m.corners_x + size_t(rc.x + dx);
        used[corner] = 1;
        if (collar) pinned[corner] = 1;
      }
    }
  }
  m.node_of_corner.assign(size_t(m.corners_x) * m.corners_y, -1);
  for (int cy = 0; cy < m.corners_y; ++cy) {
    for (int cx = 0; cx < m.corners_x; ++cx) {
      size_t corner = size_t(cy) * m.corners_x + size_t(cx);
      if (!used[corner]) continue;
      m.node_of_corner[corner] = int32_t(m.corner_of_node.size());
      m.corner_of_node.push_back({cx, cy});
      m.constrained.push_back(pinned[corner]);
    }
  }

  // Two triangles per cell, diagonal from the lower-left to the upper-right
  // corner in every cell (uniform direction keeps refinements nested).
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    auto corner_node = [&](int dx, int dy) {
      return m.node_of_corner[size_t(rc.y + dy) * m.corners_x + size_t(rc.x + dx)];
    };
    int32_t c00 = corner_node(0, 0), c10 = corner_node(1, 0);
    int32_t c01 = corner_node(0, 1), c11 = corner_node(1, 1);
    Vec2 cc = d.cell_center(cell);
    const double s = d.spacing / 6.0;
    m.tri_nodes.insert(m.tri_nodes.end(), {c00, c10, c11});
    m.tri_centroid.push_back({cc.x + s, cc.y - s});
    m.tri_nodes.insert(m.tri_nodes.end(), {c00, c11, c01});
    m.tri_centroid.push_back({cc.x - s, cc.y + s});
  }
  return m;
}

double datum_energy(const BulkDensity& f, const GridDomain& domain, const Mat2& xi) {
  double sum = 0.0;
  const double h = domain.spacing;
  const double area = 0.5 * h * h;
  const double s = h / 6.0;
  for (int cell = 0; cell < domain.cell_count(); ++cell) {
    Vec2 cc = domain.cell_center(cell);
    sum += area * f.evaluate({cc.x + s, cc.y - s}, xi);
    sum += area * f.evaluate({cc.x - s, cc.y + s}, xi);
  }
  return sum;
}

namespace {

// Basis gradients of the two triangle shapes (times spacing).  Shape 0:
// vertices (0,0) (1,0) (1,1); shape 1: vertices (0,0) (1,1) (0,1).
constexpr double kBasisGrad[2][3][2] = {
    {{-1.0, 0.0}, {1.0, -1.0}, {0.0, 1.0}},
    {{0.0, -1.0}, {1.0, 0.0}, {-1.0, 1.0}},
};

struct QuadraticForm {
  const FemMesh& mesh;
  bool scalar;
  int comps;
  std::vector<double> coeff;  // a(centroid) per triangle
  double inv_h;

  QuadraticForm(const FemMesh& m, const BulkDensity& f)
      : mesh(m), scalar(f.scalar_mode), comps(f.scalar_mode ? 1 : 2) {
    if (!f.quadratic_coeff) {
      throw UnsupportedDensity("bulk solver needs a quadratic coefficient model");
    }
    coeff.resize(size_t(m.triangle_count()));
    for (int t = 0; t < m.triangle_count(); ++t) {
      coeff[size_t(t)] = f.quadratic_coeff(m.tri_centroid[size_t(t)]);
      if (!(coeff[size_t(t)] > 0.0)) {
        throw UnsupportedDensity("quadratic coefficient must be positive");
      }
    }
    inv_h = 1.0 / m.domain->spacing;
  }

  size_t dofs() const { return size_t(mesh.node_count()) * size_t(comps); }

  // out = gradient of the quadratic energy at u (linear in u).
  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    const int ntri = mesh.triangle_count();
    for (int t = 0; t < ntri; ++t) {
      const int shape = t & 1;
      const int32_t* nodes = &mesh.tri_nodes[size_t(t) * 3];
      const double w = coeff[size_t(t)] * mesh.tri_area;
      if (scalar) {
        double gx = 0.0, gy = 0.0;
        for (int i = 0; i < 3; ++i) {
          double v = u[size_t(nodes[i])];
          gx += v * kBasisGrad[shape][i][0];
          gy += v * kBasisGrad[shape][i][1];
        }
        gx *= inv_h;
        gy *= inv_h;
        for (int i = 0; i < 3; ++i) {
          out[size_t(nodes[i])] +=
              2.0 * w * (gx * kBasisGrad[shape][i][0] + gy * kBasisGrad[shape][i][1]) * inv_h;
        }
      } else {
        double g[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (int i = 0; i < 3; ++i) {
          for (int c = 0; c < 2; ++c) {
            double v = u[size_t(nodes[i]) * 2 + size_t(c)];
            g[c][0] += v * kBasisGrad[shape][i][0];
            g[c][1] += v * kBasisGrad[shape][i][1];
          }
        }
        // d energy / d g = w * (g + g^T), all times 1/h^2 from the two
        // gradient factors.
        double s00 = 2.0 * g[0][0], s11 = 2.0 * g[1][1];
        double s01 = g[0][1] + g[1][0];
        const double q = w * inv_h * inv_h;
        for (int i = 0; i < 3; ++i) {
          double bx = kBasisGrad[shape][i][0], by = kBasisGrad[shape][i][1];
          out[size_t(nodes[i]) * 2 + 0] += q * (s00 * bx + s01 * by);
          out[size_t(nodes[i]) * 2 + 1] += q * (s01 * bx + s11 * by);
        }
      }
    }
  }

  std::vector<double> diagonal() const {
    std::vector<double> diag(dofs(), 0.0);
    const int ntri = mesh.triangle_count();
    for (int t = 0; t < ntri; ++t) {
      const int shape = t & 1;
      const int32_t* nodes = &mesh.tri_nodes[size_t(t) * 3];
      const double w = coeff[size_t(t)] * mesh.tri_area * inv_h * inv_h;
      for (int i = 0; i < 3; ++i) {
        double bx = kBasisGrad[shape][i][0], by = kBasisGrad[shape][i][1];
        double qq = bx * bx + by * by;
        if (scalar) {
          diag[size_t(nodes[i])] += 2.0 * w * qq;
        } else {
          diag[size_t(nodes[i]) * 2 + 0] += w * (qq + bx * bx);
          diag[size_t(nodes[i]) * 2 + 1] += w * (qq + by * by);
        }
      }
    }
    return diag;
  }
};

}  // namespace

BulkCellResult solve_bulk_cell(const BulkDensity& f, std::shared_ptr<const GridDomain> domain,
                               Vec2 x, const Mat2& xi) {
  FemMesh mesh = build_mesh(domain);
  QuadraticForm form(mesh, f);
  const size_t n = form.dofs();
  const int comps = form.comps;

  // Start from the affine datum; CG then works on the correction, which is
  // zero on constrained dofs.
  std::vector<double> u(n, 0.0);
  std::vector<uint8_t> free_dof(n, 0);
  size_t free_count = 0;
  for (int node = 0; node < mesh.node_count(); ++node) {
    Vec2 p = mesh.node_position(node) - x;
    if (comps == 1) {
      u[size_t(node)] = last_row(xi).x * p.x + last_row(xi).y * p.y;
    } else {
      Vec2 v = xi.apply(p);
      u[size_t(node) * 2 + 0] = v.x;
      u[size_t(node) * 2 + 1] = v.y;
    }
    if (!mesh.constrained[size_t(node)]) {
      for (int c = 0; c < comps; ++c) free_dof[size_t(node) * size_t(comps) + size_t(c)] = 1;
      free_count += size_t(comps);
    }
  }

  BulkCellResult res;
  res.dof = int(free_count);
  res.raster_area = double(domain->cell_count()) * domain->spacing * domain->spacing;

  std::vector<double> b(n), r(n), z(n), p(n), q(n);
  form.apply(u, b);
  double bnorm2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    b[i] = free_dof[i] ? -b[i] : 0.0;
    bnorm2 += b[i] * b[i];
  }

  if (bnorm2 > 0.0) {
    std::vector<double> diag = form.diagonal();
    const double tol2 = 1e-20 * bnorm2;  // relative residual 1e-10
    const int max_iter = int(50.0 * std::sqrt(double(free_count))) + 10;
    std::vector<double> w(n, 0.0);
    r = b;
    double rz = 0.0;
    for (size_t i = 0; i < n; ++i) {
      z[i] = free_dof[i] ? r[i] / diag[i] : 0.0;
      rz += r[i] * z[i];
    }
    p = z;
    double rnorm2 = bnorm2;
    int iter = 0;
    while (rnorm2 > tol2) {
      if (iter >= max_iter) throw SolverError("bulk conjugate gradients failed to converge");
      form.apply(p, q);
      double pq = 0.0;
      for (size_t i = 0; i < n; ++i) {
        q[i] = free_dof[i] ? q[i] : 0.0;
        pq += p[i] * q[i];
      }
      if (!(pq > 0.0)) throw SolverError("bulk stiffness lost positivity");
      double alpha = rz / pq;
      rnorm2 = 0.0;
      for (size_t i = 0; i < n; ++i) {
        w[i] += alpha * p[i];
        r[i] -= alpha * q[i];
        rnorm2 += r[i] * r[i];
      }
      double rz_next = 0.0;
      for (size_t i = 0; i < n; ++i) {
        z[i] = free_dof[i] ? r[i] / diag[i] : 0.0;
        rz_next += r[i] * z[i];
      }
      double beta = rz_next / rz;
      rz = rz_next;
      for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
      ++iter;
    }
    for (size_t i = 0; i < n; ++i) u[i] += w[i];
    res.iterations = iter;
    res.rel_residual = std::sqrt(rnorm2 / bnorm2);
  }

  // Evaluate the density itself at the discrete minimizer.
  double energy = 0.0;
  const double inv_h = 1.0 / domain->spacing;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const int shape = t & 1;
    const int32_t* nodes = &mesh.tri_nodes[size_t(t) * 3];
    Mat2 grad = Mat2::zero();
    if (comps == 1) {
      for (int i = 0; i < 3; ++i) {
        double v = u[size_t(nodes[i])];
        grad.m[1][0] += v * kBasisGrad[shape][i][0] * inv_h;
        grad.m[1][1] += v * kBasisGrad[shape][i][1] * inv_h;
      }
    } else {
      for (int i = 0; i < 3; ++i) {
        for (int c = 0; c < 2; ++c) {
          double v = u[size_t(nodes[i]) * 2 + size_t(c)];
          grad.m[c][0] += v * kBasisGrad[shape][i][0] * inv_h;
          grad.m[c][1] += v * kBasisGrad[shape][i][1] * inv_h;
        }
      }
    }
    energy += mesh.tri_area * f.evaluate(mesh.tri_centroid[size_t(t)], grad);
  }
  res.raw_energy = energy;
  // Continuum normalization: pi rho^2 for discs, the full side^2 for squares
  // (the raster covers a square exactly whenever 2 rho / spacing is an even
  // integer, which every built-in scenario uses).
  res.normalized = energy / domain->area();
  res.scalar_field = (comps == 1);
  res.displacement = std::move(u);
  return res;
}

}  // namespace voidhom
