#include "voidhom/surface.hpp"

#include <cmath>
#include <cstdlib>

#include "voidhom/maxflow.hpp"

namespace voidhom {

SurfaceCellResult minimize_two_label(const SurfaceDensity& g, const LabelField& datum,
                                     const Stencil& stencil) {
  const GridDomain& d = *datum.domain;
  PerimeterEvaluator ev(datum.domain, g, stencil);
  const std::vector<int>& reps = ev.representatives();

  // Node ids: 0 = source (In side), 1 = sink (Out side), then free cells.
  std::vector<int32_t> node_of_cell(size_t(d.cell_count()), -1);
  int32_t next = 2;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    if (!datum.frozen[size_t(cell)]) node_of_cell[size_t(cell)] = next++;
  }

  FlowNetwork net;
  net.node_count = next;
  net.source = 0;
  net.sink = 1;
  std::vector<int64_t> to_source(size_t(next), 0);
  std::vector<int64_t> to_sink(size_t(next), 0);

  for (int cell = 0; cell < d.cell_count(); ++cell) {
    IVec2 rc = d.raster_of_cell[size_t(cell)];
    for (int k : reps) {
      IVec2 o = stencil.offsets[size_t(k)];
      int32_t nb = d.cell_at(rc.x + o.x, rc.y + o.y);
      if (nb < 0) continue;
      bool fa = !datum.frozen[size_t(cell)];
      bool fb = !datum.frozen[size_t(nb)];
      if (!fa && !fb) continue;  // constant, outside the optimization
      int64_t cap = quantize_capacity(ev.edge_weight(cell, k));
      if (fa && fb) {
        net.add_edge(node_of_cell[size_t(cell)], node_of_cell[size_t(nb)], cap, cap);
      } else {
        int32_t fn = fa ? node_of_cell[size_t(cell)] : node_of_cell[size_t(nb)];
        Label pinned = fa ? datum.labels[size_t(nb)] : datum.labels[size_t(cell)];
        if (pinned == Label::In) {
          to_source[size_t(fn)] += cap;
        } else {
          to_sink[size_t(fn)] += cap;
        }
      }
    }
  }
  for (int32_t v = 2; v < next; ++v) {
    if (to_source[size_t(v)] > 0) net.add_edge(0, v, to_source[size_t(v)]);
    if (to_sink[size_t(v)] > 0) net.add_edge(v, 1, to_sink[size_t(v)]);
  }

  MaxflowResult mf = max_flow(net);
  if (!mf.duality_ok) throw SolverError("two-label min-cut: duality certificate failed");

  SurfaceCellResult res;
  res.labels = datum;
  for (int cell = 0; cell < d.cell_count(); ++cell) {
    int32_t v = node_of_cell[size_t(cell)];
    if (v < 0) continue;
    res.labels.labels[size_t(cell)] = mf.source_side[size_t(v)] ? Label::In : Label::Out;
  }
  res.flow = mf.flow;

  // Replay: the quantized cost of the returned labeling must equal the flow.
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
      if (movable && la != lb) qsum += quantize_capacity(w);
    }
  }
  if (qsum != mf.flow) throw SolverError("two-label min-cut: optimum replay mismatch");
  res.raw_energy = raw;
  return res;
}

SurfaceCellResult solve_void_cell(const SurfaceDensity& g,
                                  std::shared_ptr<const GridDomain> domain, Vec2 x, Vec2 nu,
                                  const Stencil& stencil) {
  if (domain->shape == Shape::Square) {
    Vec2 n = normalized(nu);
    if (std::abs(n.x) > 1e-12 && std::abs(n.y) > 1e-12) {
      throw UnsupportedDensity("square void cells support axis-aligned normals only");
    }
  }
  LabelField datum = halfspace_labels(*domain, x, nu);
  SurfaceCellResult res = minimize_two_label(g, datum, stencil);
  res.normalized = res.raw_energy / (2.0 * domain->rho);
  return res;
}

}  // namespace voidhom
