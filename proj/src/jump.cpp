#include "voidhom/jump.hpp"

#include <cmath>

#include "voidhom/maxflow.hpp"

namespace voidhom {

namespace {

// Monotone-coupling capacity: never the bottleneck, never in a finite cut,
// and small enough that sums over a whole network stay inside int64.
constexpr int64_t kInfiniteCapacity = int64_t(1) << 50;

int label_level(Label l) {
  switch (l) {
    case Label::SolidMinus:
      return 0;
    case Label::Void:
      return 1;
    case Label::SolidPlus:
      return 2;
    default:
      throw SolverError("three-label solver saw a two-label value");
  }
}

Label level_label(int level) {
  return level == 0 ? Label::SolidMinus : (level == 1 ? Label::Void : Label::SolidPlus);
}

}  // namespace

JumpCellResult minimize_three_label(const SurfaceDensity& g, const LabelField& datum,
                                    const Stencil& stencil) {
  const GridDomain& d = *datum.domain;
  PerimeterEvaluator ev(datum.domain, g, stencil);
  const std::vector<int>& reps = ev.representatives();
  const int64_t q_large = quantize_capacity(ev.large());

  // Level variables per free cell: y1 = [label >= Void], y2 = [label >=
  // SolidPlus]; node on the source side <=> variable is 1.  Node ids:
  // 0 source, 1 sink, then (y1, y2) per free cell.
  std::vector<int32_t> first_node(size_t(d.cell_count()), -1);
  int32_t next = 2;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    if (!datum.frozen[size_t(cell)]) {
      first_node[size_t(cell)] = next;
      next += 2;
    }
  }

  FlowNetwork net;
  net.node_count = next;
  net.source = 0;
  net.sink = 1;
  std::vector<int64_t> to_source(size_t(next), 0);
  std::vector<int64_t> to_sink(size_t(next), 0);

  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    bool fa = !datum.frozen[size_t(cell)];
    if (fa) {
      // y2 <= y1: forbid (y2 = 1, y1 = 0).
      net.add_edge(first_node[size_t(cell)] + 1, first_node[size_t(cell)], kInfiniteCapacity);
    }
    for (int k : reps) {
      IVec2 o = stencil.offsets[size_t(k)];
      int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
      if (nb < 0) continue;
      bool fb = !datum.frozen[size_t(nb)];
      if (!fa && !fb) continue;
      int64_t qw = quantize_capacity(ev.edge_weight(cell, k));
      int64_t cross = q_large - 2 * qw;
      if (cross < 0) throw SolverError("forbidden-contact penalty below twice the edge weight");
      if (fa && fb) {
        int32_t a1 = first_node[size_t(cell)], a2 = a1 + 1;
        int32_t b1 = first_node[size_t(nb)], b2 = b1 + 1;
        // Per-level disagreement costs plus the distance-2 surcharge.
        net.add_edge(a1, b1, qw, qw);
        net.add_edge(a2, b2, qw, qw);
        net.add_edge(a2, b1, cross);
        net.add_edge(b2, a1, cross);
      } else {
        int32_t n1 = fa ? first_node[size_t(cell)] : first_node[size_t(nb)];
        int32_t n2 = n1 + 1;
        Label pinned = fa ? datum.labels[size_t(nb)] : datum.labels[size_t(cell)];
        switch (label_level(pinned)) {
          case 0:  // cost qw * y1 + (q_large - qw) * y2
            to_sink[size_t(n1)] += qw;
            to_sink[size_t(n2)] += q_large - qw;
            break;
          case 1:  // cost qw * (1 - y1) + qw * y2
            to_source[size_t(n1)] += qw;
            to_sink[size_t(n2)] += qw;
            break;
          default:  // cost (q_large - qw) * (1 - y1) + qw * (1 - y2)
            to_source[size_t(n1)] += q_large - qw;
            to_source[size_t(n2)] += qw;
            break;
        }
      }
    }
  }
  for (int32_t v = 2; v < next; ++v) {
    if (to_source[size_t(v)] > 0) net.add_edge(0, v, to_source[size_t(v)]);
    if (to_sink[size_t(v)] > 0) net.add_edge(v, 1, to_sink[size_t(v)]);
  }

  MaxflowResult mf = max_flow(net);
  if (!mf.duality_ok) throw SolverError("three-label min-cut: duality certificate failed");

  JumpCellResult res;
  res.labels = datum;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    int32_t n1 = first_node[size_t(cell)];
    if (n1 < 0) continue;
    int y1 = mf.source_side[size_t(n1)] ? 1 : 0;
    int y2 = mf.source_side[size_t(n1) + 1] ? 1 : 0;
    if (y2 > y1) throw SolverError("three-label min-cut: level monotonicity violated");
    res.labels.labels[size_t(cell)] = level_label(y1 + y2);
  }
  res.flow = mf.flow;

  // Replay the quantized objective on the returned labeling; it must equal
  // the flow exactly.  Also audit that no forbidden contact survived.
  int64_t qsum = 0;
  double raw = 0.0;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    Label la = res.labels.labels[size_t(cell)];
    for (int k : reps) {
      IVec2 o = stencil.offsets[size_t(k)];
      int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
      if (nb < 0) continue;
      Label lb = res.labels.labels[size_t(nb)];
      double w = ev.edge_weight(cell, k);
      raw += ev.pair_cost(la, lb, w);
      bool movable = !datum.frozen[size_t(cell)] || !datum.frozen[size_t(nb)];
      if (!movable || la == lb) continue;
      int dist = std::abs(label_level(la) - label_level(lb));
      if (dist == 2 && movable) {
        throw SolverError("three-label min-cut: forbidden contact in the optimum");
      }
      qsum += quantize_capacity(w);
    }
  }
  if (qsum != mf.flow) throw SolverError("three-label min-cut: optimum replay mismatch");
  res.raw_energy = raw;
  return res;
}

JumpCellResult solve_jump_cell(const SurfaceDensity& g, std::shared_ptr<const GridDomain> domain,
                               Vec2 x, Vec2 nu, double eps, const Stencil& stencil) {
  if (domain->shape == Shape::Square) {
    Vec2 n = normalized(nu);
    if (std::abs(n.x) > 1e-12 && std::abs(n.y) > 1e-12) {
      throw UnsupportedDensity("square jump cells support axis-aligned normals only");
    }
  }
  LabelField datum = thinlayer_labels(*domain, x, nu, eps);
  JumpCellResult res = minimize_three_label(g, datum, stencil);
  res.normalized = res.raw_energy / (2.0 * domain->rho);
  return res;
}

}  // namespace voidhom
