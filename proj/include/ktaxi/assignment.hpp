#pragma once

#include <cstdint>
#include <vector>

namespace ktaxi {

using CostMatrix = std::vector<std::vector<std::int64_t>>;

struct Assignment {
  std::int64_t cost = 0;
  std::vector<int> row_to_col;
};

// Minimum-cost perfect matching on a square matrix (Hungarian method, O(n^3)).
Assignment min_cost_assignment(const CostMatrix& cost);

// Reference implementation by enumerating permutations; n <= 9.
Assignment exhaustive_assignment(const CostMatrix& cost);

}  // namespace ktaxi
