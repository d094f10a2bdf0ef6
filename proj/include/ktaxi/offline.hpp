#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ktaxi/double_coverage.hpp"
#include "ktaxi/min_cost_flow.hpp"

namespace ktaxi {

// Cost of an empty move; need not be symmetric but must satisfy the triangle
// inequality.
using DistanceFn = std::function<std::int64_t(Vertex, Vertex)>;

enum class CostModel { Full, Upward };

DistanceFn tree_distance(const WeightedTree& t, CostModel model = CostModel::Full);

// Empty move of one server, performed just before request `before` is served
// (before == sequence length means after the last request).
struct ScheduledMove {
  std::size_t before = 0;
  int server = -1;
  Vertex from = kNoVertex;
  Vertex to = kNoVertex;
  std::int64_t cost = 0;
};

struct OfflineSchedule {
  Configuration initial;
  std::vector<ScheduledMove> moves;   // ordered by `before`
  std::vector<int> server_of;          // server that serves / is relocated by each request
  Configuration final_config;
  std::int64_t total_cost = 0;
};

struct OfflineResult {
  std::int64_t cost = 0;
  OfflineSchedule schedule;
};

inline constexpr std::int64_t kDefaultStateBudget = 10'000'000;

// Exhaustive search over server multisets. Servers move lazily, so positions
// are restricted to initial positions and requested points.
OfflineResult optimal_cost_dp(const DistanceFn& dist, const Configuration& init,
                              const RequestSequence& seq,
                              const std::optional<Configuration>& fixed_final = std::nullopt,
                              std::int64_t budget = kDefaultStateBudget);
OfflineResult optimal_cost_dp(const WeightedTree& t, const Configuration& init,
                              const RequestSequence& seq,
                              const std::optional<Configuration>& fixed_final = std::nullopt,
                              CostModel model = CostModel::Full,
                              std::int64_t budget = kDefaultStateBudget);

// Min-cost flow reduction: one unit per server, one mandatory unit arc per job
// (a simple request together with the relocations chained behind it).
OfflineResult optimal_cost_flow(const DistanceFn& dist, const Configuration& init,
                                const RequestSequence& seq,
                                const std::optional<Configuration>& fixed_final = std::nullopt);
OfflineResult optimal_cost_flow(const WeightedTree& t, const Configuration& init,
                                const RequestSequence& seq,
                                const std::optional<Configuration>& fixed_final = std::nullopt,
                                CostModel model = CostModel::Full);

// Replays a schedule, checking that it is feasible and ends in its stated final
// configuration. Returns the cost under `dist`.
std::int64_t replay_schedule(const DistanceFn& dist, const RequestSequence& seq,
                             const OfflineSchedule& schedule);

}  // namespace ktaxi
