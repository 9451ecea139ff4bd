#include "voidhom/maxflow.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace voidhom {

void dump_network(std::ostream& out, const FlowNetwork& net) {
  out << "network " << net.node_count << " " << net.source << " " << net.sink << "\n";
  for (const FlowNetwork::Arc& a : net.arcs) {
    out << "arc " << a.from << " " << a.to << " " << a.capacity << "\n";
  }
}

namespace {

// Level-graph augmenting-path solver (Dinic).  Deterministic: arcs are
// scanned in ascending id order everywhere, so the whole execution -- flow,
// residuals, and the reported cut side -- is a pure function of the input.
//
// The cell networks this engine sees have their terminal arcs concentrated
// on thin boundary rings, so augmenting paths cross the entire raster.  A
// blocking-flow phase saturates every shortest path at once, which keeps the
// phase count near the raster diameter instead of paying a tree-repair sweep
// per path.
struct Dinic {
  const FlowNetwork& net;
  std::vector<int64_t> residual;
  std::vector<int32_t> to;        // arc head, copied out of Arc for locality
  std::vector<int32_t> head;      // CSR offsets over adj
  std::vector<int32_t> adj;       // arc ids grouped by tail, ascending
  std::vector<int32_t> level;
  std::vector<int32_t> it;        // current-arc cursor into adj
  std::vector<int32_t> queue;
  std::vector<int32_t> path;      // arc ids from the source during DFS
  int64_t flow = 0;

  explicit Dinic(const FlowNetwork& n) : net(n) {
    const int32_t nn = n.node_count;
    residual.reserve(n.arcs.size());
    to.reserve(n.arcs.size());
    for (const FlowNetwork::Arc& a : n.arcs) {
      if (a.capacity < 0) throw std::invalid_argument("negative capacity");
      if (a.from < 0 || a.from >= nn || a.to < 0 || a.to >= nn)
        throw std::invalid_argument("arc endpoint out of range");
      residual.push_back(a.capacity);
      to.push_back(a.to);
    }
    std::vector<int32_t> degree(size_t(nn) + 1, 0);
    for (const FlowNetwork::Arc& a : n.arcs) ++degree[size_t(a.from) + 1];
    head.assign(size_t(nn) + 1, 0);
    for (int32_t v = 0; v < nn; ++v) head[size_t(v) + 1] = head[size_t(v)] + degree[size_t(v) + 1];
    adj.assign(n.arcs.size(), 0);
    std::vector<int32_t> fill(head.begin(), head.end() - 1);
    for (int32_t a = 0; a < int32_t(n.arcs.size()); ++a) {
      adj[size_t(fill[size_t(n.arcs[size_t(a)].from)]++)] = a;
    }
    level.assign(size_t(nn), -1);
    it.assign(size_t(nn), 0);
    queue.reserve(size_t(nn));
  }

  bool bfs() {
    std::fill(level.begin(), level.end(), -1);
    queue.clear();
    queue.push_back(net.source);
    level[size_t(net.source)] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int32_t v = queue[qi];
      for (int32_t i = head[size_t(v)]; i < head[size_t(v) + 1]; ++i) {
        int32_t a = adj[size_t(i)];
        if (residual[size_t(a)] == 0) continue;
        int32_t q = to[size_t(a)];
        if (level[size_t(q)] >= 0) continue;
        level[size_t(q)] = level[size_t(v)] + 1;
        queue.push_back(q);
      }
    }
    return level[size_t(net.sink)] >= 0;
  }

  // One blocking flow on the current level graph, iteratively: the path
  // stack holds the arcs taken from the source; dead nodes get level -1.
  void blocking_flow() {
    for (int32_t v = 0; v < net.node_count; ++v) it[size_t(v)] = head[size_t(v)];
    path.clear();
    int32_t v = net.source;
    while (true) {
      if (v == net.sink) {
        int64_t bottleneck = residual[size_t(path[0])];
        for (int32_t a : path) bottleneck = std::min(bottleneck, residual[size_t(a)]);
        int32_t retreat_to = -1;  // index into path of the first saturated arc
        for (size_t pi = 0; pi < path.size(); ++pi) {
          int32_t a = path[pi];
          residual[size_t(a)] -= bottleneck;
          residual[size_t(a ^ 1)] += bottleneck;
          if (residual[size_t(a)] == 0 && retreat_to < 0) retreat_to = int32_t(pi);
        }
        flow += bottleneck;
        path.resize(size_t(retreat_to));
        v = path.empty() ? net.source : to[size_t(path.back())];
        continue;
      }
      int32_t chosen = -1;
      for (int32_t& i = it[size_t(v)]; i < head[size_t(v) + 1]; ++i) {
        int32_t a = adj[size_t(i)];
        if (residual[size_t(a)] == 0) continue;
        int32_t q = to[size_t(a)];
        if (level[size_t(q)] != level[size_t(v)] + 1) continue;
        chosen = a;
        break;
      }
      if (chosen >= 0) {
        path.push_back(chosen);
        v = to[size_t(chosen)];
        continue;
      }
      level[size_t(v)] = -1;  // no admissible arc: prune for this phase
      if (path.empty()) return;
      path.pop_back();
      v = path.empty() ? net.source : to[size_t(path.back())];
    }
  }

  MaxflowResult run() {
    while (bfs()) blocking_flow();

    MaxflowResult res;
    res.flow = flow;
    res.source_side.assign(size_t(net.node_count), 0);
    std::vector<int32_t> stack{net.source};
    res.source_side[size_t(net.source)] = 1;
    while (!stack.empty()) {
      int32_t v = stack.back();
      stack.pop_back();
      for (int32_t i = head[size_t(v)]; i < head[size_t(v) + 1]; ++i) {
        int32_t a = adj[size_t(i)];
        if (residual[size_t(a)] == 0) continue;
        int32_t q = to[size_t(a)];
        if (!res.source_side[size_t(q)]) {
          res.source_side[size_t(q)] = 1;
          stack.push_back(q);
        }
      }
    }
    int64_t cut = 0;
    for (size_t a = 0; a < net.arcs.size(); ++a) {
      const FlowNetwork::Arc& arc = net.arcs[a];
      if (res.source_side[size_t(arc.from)] && !res.source_side[size_t(arc.to)]) {
        cut += arc.capacity;
      }
    }
    res.duality_ok = (cut == flow) && !res.source_side[size_t(net.sink)];
    return res;
  }
};

}  // namespace

MaxflowResult max_flow(const FlowNetwork& net) {
  if (net.node_count < 2 || net.source == net.sink) {
    throw std::invalid_argument("network needs distinct source and sink");
  }
  Dinic solver(net);
  return solver.run();
}

}  // namespace voidhom
