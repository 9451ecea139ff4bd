#include "voidhom/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voidhom {

int64_t oracle_min_cut_value(const FlowNetwork& net) {
  if (net.node_count > 22) throw std::invalid_argument("oracle_min_cut_value: too many nodes");
  std::vector<int32_t> movable;
  for (int32_t v = 0; v < net.node_count; ++v) {
    if (v != net.source && v != net.sink) movable.push_back(v);
  }
  std::vector<uint8_t> side(size_t(net.node_count), 0);
  side[size_t(net.source)] = 1;
  int64_t best = std::numeric_limits<int64_t>::max();
  const uint32_t combos = uint32_t(1) << movable.size();
  for (uint32_t mask = 0; mask < combos; ++mask) {
    for (size_t i = 0; i < movable.size(); ++i) {
      side[size_t(movable[i])] = (mask >> i) & 1u;
    }
    int64_t cut = 0;
    for (const FlowNetwork::Arc& a : net.arcs) {
      if (side[size_t(a.from)] && !side[size_t(a.to)]) cut += a.capacity;
    }
    best = std::min(best, cut);
  }
  return best;
}

OracleLabeling oracle_exhaustive_labels(const LabelField& base, const SurfaceDensity& g,
                                        const Stencil& stencil, const std::vector<int>& cells,
                                        const std::vector<Label>& palette) {
  double space = 1.0;
  for (size_t i = 0; i < cells.size(); ++i) space *= double(palette.size());
  if (space > 2e6) throw std::invalid_argument("oracle_exhaustive_labels: search space too big");

  PerimeterEvaluator ev(base.domain, g, stencil);
  LabelField work = base;
  OracleLabeling best;
  best.energy = std::numeric_limits<double>::infinity();

  double energy = ev.total(work);
  // Depth-first over assignments, maintaining the energy incrementally.
  std::vector<size_t> choice(cells.size(), 0);
  size_t depth = 0;
  std::vector<Label> saved(cells.size());
  while (true) {
    if (depth == cells.size()) {
      if (energy < best.energy) {
        best.energy = energy;
        best.labels = work.labels;
      }
      // Backtrack to the next pending choice.
      while (depth > 0) {
        --depth;
        int cell = cells[depth];
        energy += ev.flip_delta(work, cell, saved[depth]);
        work.labels[size_t(cell)] = saved[depth];
        if (++choice[depth] < palette.size()) break;
        choice[depth] = 0;
      }
      if (depth == 0 && choice[0] == 0) break;
    }
    int cell = cells[depth];
    saved[depth] = work.labels[size_t(cell)];
    Label next = palette[choice[depth]];
    energy += ev.flip_delta(work, cell, next);
    work.labels[size_t(cell)] = next;
    ++depth;
  }
  return best;
}

namespace {

// Column dynamic program shared by the threshold and band oracles.  A
// "pattern" fixes the labels of one raster column (frozen cells keep base
// labels); patterns have the same meaning in every column.  The stencil may
// couple columns at distance <= 2.
class ColumnDp {
 public:
  ColumnDp(const LabelField& base, const PerimeterEvaluator& ev,
           std::vector<std::vector<Label>> pattern_rows)
      : base_(base), ev_(ev), patterns_(std::move(pattern_rows)) {
    const GridDomain& d = ev_.domain();
    for (int k : ev_.representatives()) {
      IVec2 o = ev_.stencil().offsets[size_t(k)];
      if (o.x == 0) intra_.push_back(k);
      if (o.x == 1) right1_.push_back(k);   // from column j to column j+1
      if (o.x == -1) left1_.push_back(k);   // from column j to column j-1
      if (o.x == 2) right2_.push_back(k);
      if (o.x == -2) left2_.push_back(k);
      if (std::abs(o.x) > 2) throw GridError("column dp supports stencils spanning <= 2 columns");
    }
    (void)d;
  }

  double minimize(std::vector<int>* argmin) {
    const GridDomain& d = ev_.domain();
    const int w = d.nx;
    const int np = int(patterns_.size());
    if (w < 3) throw GridError("column dp needs at least three columns");

    // labels_[j][p] = labels of column j under pattern p.
    labels_.assign(size_t(w), {});
    for (int j = 0; j < w; ++j) {
      labels_[size_t(j)].resize(size_t(np));
      for (int p = 0; p < np; ++p) labels_[size_t(j)][size_t(p)] = column_labels(j, p);
    }

    // dp[a][b]: best energy of columns 0..j with t_{j-1} = a, t_j = b.
    std::vector<double> dp(size_t(np) * np), next(size_t(np) * np);
    std::vector<std::vector<int>> back(size_t(w), std::vector<int>(size_t(np) * np, -1));
    std::vector<double> intra0(size_t(np), 0.0), intra1(size_t(np), 0.0);
    for (int p = 0; p < np; ++p) {
      intra0[size_t(p)] = intra_cost(0, p);
      intra1[size_t(p)] = intra_cost(1, p);
    }
    for (int a = 0; a < np; ++a) {
      for (int b = 0; b < np; ++b) {
        dp[size_t(a) * np + b] = intra0[size_t(a)] + intra1[size_t(b)] + pair1_cost(1, a, b);
      }
    }
    for (int j = 2; j < w; ++j) {
      std::vector<double> intra(size_t(np), 0.0);
      for (int c = 0; c < np; ++c) intra[size_t(c)] = intra_cost(j, c);
      std::vector<double> p1(size_t(np) * np), p2(size_t(np) * np);
      for (int b = 0; b < np; ++b) {
        for (int c = 0; c < np; ++c) {
          p1[size_t(b) * np + c] = pair1_cost(j, b, c);
          p2[size_t(b) * np + c] = pair2_cost(j, b, c);
        }
      }
      for (int b = 0; b < np; ++b) {
        for (int c = 0; c < np; ++c) {
          double best = std::numeric_limits<double>::infinity();
          int best_a = -1;
          for (int a = 0; a < np; ++a) {
            double v = dp[size_t(a) * np + b] + p2[size_t(a) * np + c];
            if (v < best) {
              best = v;
              best_a = a;
            }
          }
          next[size_t(b) * np + c] = best + intra[size_t(c)] + p1[size_t(b) * np + c];
          back[size_t(j)][size_t(b) * np + c] = best_a;
        }
      }
      dp.swap(next);
    }

    double best = std::numeric_limits<double>::infinity();
    int best_a = -1, best_b = -1;
    for (int a = 0; a < np; ++a) {
      for (int b = 0; b < np; ++b) {
        if (dp[size_t(a) * np + b] < best) {
          best = dp[size_t(a) * np + b];
          best_a = a;
          best_b = b;
        }
      }
    }
    if (argmin) {
      std::vector<int> seq(size_t(w), 0);
      seq[size_t(w) - 1] = best_b;
      seq[size_t(w) - 2] = best_a;
      for (int j = w - 1; j >= 2; --j) {
        int prev = back[size_t(j)][size_t(seq[size_t(j) - 1]) * np + seq[size_t(j)]];
        seq[size_t(j) - 2] = prev;
      }
      *argmin = seq;
    }
    return best;
  }

  std::vector<Label> column_labels(int j, int p) const {
    const GridDomain& d = ev_.domain();
    std::vector<Label> col(size_t(d.ny), Label::In);
    for (int iy = 0; iy < d.ny; ++iy) {
      int32_t cell = d.cell_at(j, iy);
      if (cell < 0) continue;
      col[size_t(iy)] = base_.frozen[size_t(cell)] ? base_.labels[size_t(cell)]
                                                   : patterns_[size_t(p)][size_t(iy)];
    }
    return col;
  }

 private:
  double intra_cost(int j, int p) const {
    const GridDomain& d = ev_.domain();
    const std::vector<Label>& col = labels_[size_t(j)][size_t(p)];
    double sum = 0.0;
    for (int iy = 0; iy < d.ny; ++iy) {
      int32_t cell = d.cell_at(j, iy);
      if (cell < 0) continue;
      for (int k : intra_) {
        IVec2 o = ev_.stencil().offsets[size_t(k)];
        if (d.cell_at(j, iy + o.y) < 0) continue;
        sum += ev_.pair_cost(col[size_t(iy)], col[size_t(iy + o.y)], ev_.edge_weight(cell, k));
      }
    }
    return sum;
  }

  // Edges between columns j-1 (pattern a) and j (pattern b).
  double pair1_cost(int j, int a, int b) const {
    return cross_cost(j - 1, a, right1_, labels_[size_t(j)][size_t(b)]) +
           cross_cost(j, b, left1_, labels_[size_t(j) - 1][size_t(a)]);
  }

  // Edges between columns j-2 (pattern a) and j (pattern b).
  double pair2_cost(int j, int a, int b) const {
    return cross_cost(j - 2, a, right2_, labels_[size_t(j)][size_t(b)]) +
           cross_cost(j, b, left2_, labels_[size_t(j) - 2][size_t(a)]);
  }

  double cross_cost(int from_col, int from_pattern, const std::vector<int>& offs,
                    const std::vector<Label>& other) const {
    const GridDomain& d = ev_.domain();
    const std::vector<Label>& col = labels_[size_t(from_col)][size_t(from_pattern)];
    double sum = 0.0;
    for (int iy = 0; iy < d.ny; ++iy) {
      int32_t cell = d.cell_at(from_col, iy);
      if (cell < 0) continue;
      for (int k : offs) {
        IVec2 o = ev_.stencil().offsets[size_t(k)];
        if (d.cell_at(from_col + o.x, iy + o.y) < 0) continue;
        sum += ev_.pair_cost(col[size_t(iy)], other[size_t(iy + o.y)], ev_.edge_weight(cell, k));
      }
    }
    return sum;
  }

  const LabelField& base_;
  const PerimeterEvaluator& ev_;
  std::vector<std::vector<Label>> patterns_;           // per pattern, ny labels
  std::vector<std::vector<std::vector<Label>>> labels_;  // [column][pattern][iy]
  std::vector<int> intra_, right1_, left1_, right2_, left2_;
};

double run_column_dp(const LabelField& base, const SurfaceDensity& g, const Stencil& stencil,
                     std::vector<std::vector<Label>> patterns) {
  PerimeterEvaluator ev(base.domain, g, stencil);
  ColumnDp dp(base, ev, std::move(patterns));
  std::vector<int> argmin;
  double value = dp.minimize(&argmin);

  // Rebuild the winning labeling and re-evaluate with the shared evaluator;
  // a mismatch means the term decomposition is wrong, which must be loud.
  const GridDomain& d = ev.domain();
  LabelField full = base;
  for (int j = 0; j < d.nx; ++j) {
    std::vector<Label> col = dp.column_labels(j, argmin[size_t(j)]);
    for (int iy = 0; iy < d.ny; ++iy) {
      int32_t cell = d.cell_at(j, iy);
      if (cell >= 0) full.labels[size_t(cell)] = col[size_t(iy)];
    }
  }
  double replay = ev.total(full);
  double scale = std::max({1.0, std::abs(value), std::abs(replay)});
  if (std::abs(replay - value) > 1e-9 * scale) {
    throw std::logic_error("column dp decomposition mismatch");
  }
  return replay;
}

}  // namespace

double oracle_threshold_cut(const LabelField& base, const SurfaceDensity& g,
                            const Stencil& stencil, int row_min, int row_max, Label below,
                            Label above) {
  const GridDomain& d = *base.domain;
  if (row_min < 0 || row_max >= d.ny || row_min > row_max) {
    throw std::invalid_argument("oracle_threshold_cut: bad row window");
  }
  std::vector<std::vector<Label>> patterns;
  for (int t = row_min; t <= row_max + 1; ++t) {
    std::vector<Label> col(size_t(d.ny));
    for (int iy = 0; iy < d.ny; ++iy) col[size_t(iy)] = iy < t ? below : above;
    patterns.push_back(std::move(col));
  }
  return run_column_dp(base, g, stencil, std::move(patterns));
}

double oracle_band_cut(const LabelField& base, const SurfaceDensity& g, const Stencil& stencil,
                       int row_min, int row_max, Label lower, Label middle, Label upper) {
  const GridDomain& d = *base.domain;
  if (row_min < 0 || row_max >= d.ny || row_min > row_max) {
    throw std::invalid_argument("oracle_band_cut: bad row window");
  }
  std::vector<std::vector<Label>> patterns;
  for (int a = row_min; a <= row_max + 1; ++a) {
    for (int b = a; b <= row_max + 1; ++b) {
      std::vector<Label> col(size_t(d.ny));
      for (int iy = 0; iy < d.ny; ++iy) {
        col[size_t(iy)] = iy < a ? lower : (iy < b ? middle : upper);
      }
      patterns.push_back(std::move(col));
    }
  }
  return run_column_dp(base, g, stencil, std::move(patterns));
}

LaminateEffective laminate_effective(double a_low, double a_high, double theta) {
  LaminateEffective e;
  e.across = 1.0 / (theta / a_low + (1.0 - theta) / a_high);
  e.along = theta * a_low + (1.0 - theta) * a_high;
  return e;
}

double laminate_1d_energy(const std::vector<double>& cell_coeffs, double length, double slope) {
  if (cell_coeffs.empty() || !(length > 0.0)) {
    throw std::invalid_argument("laminate_1d_energy: degenerate profile");
  }
  const double width = length / double(cell_coeffs.size());
  double resistance = 0.0;
  for (double a : cell_coeffs) {
    if (!(a > 0.0)) throw std::invalid_argument("laminate_1d_energy: coefficients must be > 0");
    resistance += width / a;
  }
  const double delta = slope * length;
  return delta * delta / resistance;
}

}  // namespace voidhom
