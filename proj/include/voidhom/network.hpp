#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace voidhom {

// Fixed-point scale for cut capacities: weights are stored as
// round(weight * 2^20), so duality checks are exact integer comparisons.
constexpr int64_t kCapacityScale = 1 << 20;

inline int64_t quantize_capacity(double w) {
  return int64_t(w * double(kCapacityScale) + 0.5);
}

// Directed flow network with paired reverse arcs: arc 2k and 2k+1 are
// mutual reverses.  Arc order is part of the interface; the solver's
// tie-breaking follows it.
struct FlowNetwork {
  struct Arc {
    int32_t from = 0;
    int32_t to = 0;
    int64_t capacity = 0;
  };

  int32_t node_count = 0;
  int32_t source = 0;
  int32_t sink = 0;
  std::vector<Arc> arcs;

  // Appends arc (u -> v, cap) and its reverse (v -> u, rev_cap).
  void add_edge(int32_t u, int32_t v, int64_t cap, int64_t rev_cap = 0) {
    arcs.push_back({u, v, cap});
    arcs.push_back({v, u, rev_cap});
  }
};

// One arc per line: "arc <from> <to> <capacity>", preceded by a header line
// "network <nodes> <source> <sink>".
void dump_network(std::ostream& out, const FlowNetwork& net);

}  // namespace voidhom
