#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ktaxi/double_coverage.hpp"
#include "ktaxi/offline.hpp"
#include "ktaxi/tables.hpp"

namespace ktaxi {

enum class SituationKind { JMatch, Up, Down };

// A pair of online and offline configurations. For JMatch, x holds an extra
// online server and its child y an extra offline server. For Up/Down, x holds
// the unmatched online server at height h and y the unmatched offline server
// at the parent (Up) or a child (Down) of x.
struct Situation {
  SituationKind kind = SituationKind::JMatch;
  int j = 0;
  int h = 0;
  Vertex x = kNoVertex;
  Vertex y = kNoVertex;
  Configuration online;
  Configuration offline;
};

// Positions shared by both configurations, counted with multiplicity.
std::vector<Vertex> matched_positions(const Configuration& online, const Configuration& offline);

// Throws Error when the situation does not satisfy its definition on the
// unit-edge tree `t` of uniform depth.
void check_situation(const WeightedTree& t, const Situation& s);

struct Fragment {
  RequestSequence seq;
  std::int64_t dc_cost = 0;
  Situation result;
};

// Unit-edge tree of depth d with k+1 children per internal vertex.
WeightedTree kary_unit_tree(int k, int d);

// Moves one online server from x to y at Double Coverage cost 2*C(j+h,h)-1
// where h is the height of y; the offline side pays nothing.
Fragment gen_jmatch(const WeightedTree& t, const Situation& s);

// Up(h <= d-2) -> Up(h+1), Up(d-1) -> Down(d), Down(h >= 2) -> Down(h-1).
Fragment gen_transform(const WeightedTree& t, const Situation& s);

enum class LowerBoundFamily { Tree, Hst };

struct LowerBoundInstance {
  LowerBoundFamily family = LowerBoundFamily::Tree;
  int k = 0;
  int d = 0;
  std::int64_t alpha = 1;
  WeightedTree tree;
  Configuration init_online;
  Configuration init_offline;
  RequestSequence seq;
  // Tree family: exact total cost. Hst family: lower bound on upward cost.
  std::int64_t predicted_dc = 0;
  // Tree family: exact total cost. Hst family: upward cost of the schedule.
  std::int64_t predicted_opt = 0;
  OfflineSchedule offline_schedule;
  // Hst family: schedule with one extra server at the first requested leaf.
  std::optional<OfflineSchedule> extra_server_schedule;
};

LowerBoundInstance gen_tree_lowerbound(int k, int d);
LowerBoundInstance gen_hst_lowerbound(int k, int d, std::int64_t alpha);

// Distance that one extra Double Coverage server, parked far away on a new
// edge at the root, travels while the instance is served.
std::int64_t hst_pull_distance(const LowerBoundInstance& inst);

BigInt jmatch_cost(int j, int h);
BigInt transform_cost(int k, int h);  // b_h = 2*C(k+h-1, h+1)
BigInt tree_lowerbound_formula(int k, int d);
BigInt hst_lowerbound_formula(int k, int d, std::int64_t alpha);

}  // namespace ktaxi
