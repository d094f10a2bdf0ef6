#pragma once

#include <cstdint>
#include <vector>

#include "ktaxi/tree.hpp"

namespace ktaxi {

struct FlowArc {
  int from = 0;
  int to = 0;
  std::int64_t lower = 0;
  std::int64_t capacity = 0;
  std::int64_t cost = 0;
};

// Integral network with node supplies (positive = source, negative = sink).
// Supplies must sum to zero.
struct FlowNetwork {
  int nodes = 0;
  std::vector<FlowArc> arcs;
  std::vector<std::int64_t> supply;

  explicit FlowNetwork(int n = 0) : nodes(n), supply(n, 0) {}
  int add_node() {
    supply.push_back(0);
    return nodes++;
  }
  int add_arc(int from, int to, std::int64_t capacity, std::int64_t cost, std::int64_t lower = 0) {
    arcs.push_back({from, to, lower, capacity, cost});
    return static_cast<int>(arcs.size()) - 1;
  }
};

struct FlowResult {
  std::vector<std::int64_t> flow;  // per arc, including lower bounds
  std::int64_t cost = 0;
};

// Successive shortest paths with Johnson potentials. Lower bounds are removed
// by shifting them into node balances. Throws Error when infeasible or when
// the residual graph has a negative cycle at the start.
FlowResult min_cost_flow(const FlowNetwork& net);

}  // namespace ktaxi
