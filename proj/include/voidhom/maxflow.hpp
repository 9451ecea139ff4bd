#pragma once

#include <cstdint>
#include <vector>

#include "voidhom/network.hpp"

namespace voidhom {

struct MaxflowResult {
  int64_t flow = 0;
  // Minimum cut as the set of nodes reachable from the source in the final
  // residual graph (source_side[source] is always true, source_side[sink]
  // false).
  std::vector<uint8_t> source_side;
  // Exact integer duality check: flow equals the capacity across the
  // returned cut.
  bool duality_ok = false;
};

// Augmenting-path max-flow organized in shortest-path phases: BFS level
// graph, then a blocking flow found with current-arc advance/retreat.
// Deterministic: arcs are scanned in fixed ascending id order, so ties
// always resolve the same way.
MaxflowResult max_flow(const FlowNetwork& net);

}  // namespace voidhom
