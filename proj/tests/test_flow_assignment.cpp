#include <gtest/gtest.h>

#include <random>

#include "ktaxi/assignment.hpp"
#include "ktaxi/min_cost_flow.hpp"

using namespace ktaxi;

namespace {

// Enumerates every integral flow; returns nullopt when none is feasible.
std::optional<std::int64_t> brute_force(const FlowNetwork& net) {
  std::vector<std::int64_t> f(net.arcs.size());
  std::optional<std::int64_t> best;
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == net.arcs.size()) {
      std::vector<std::int64_t> bal = net.supply;
      std::int64_t cost = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        bal[net.arcs[i].from] -= f[i];
        bal[net.arcs[i].to] += f[i];
        cost += f[i] * net.arcs[i].cost;
      }
      for (auto b : bal)
        if (b != 0) return;
      if (!best || cost < *best) best = cost;
      return;
    }
    for (f[a] = net.arcs[a].lower; f[a] <= net.arcs[a].capacity; ++f[a]) rec(a + 1);
  };
  rec(0);
  return best;
}

}  // namespace

TEST(MinCostFlow, SingleArc) {
  FlowNetwork net(2);
  net.supply = {1, -1};
  net.add_arc(0, 1, 1, 5);
  EXPECT_EQ(min_cost_flow(net).cost, 5);
}

TEST(MinCostFlow, ZeroDemand) {
  FlowNetwork net(3);
  net.add_arc(0, 1, 4, 2);
  net.add_arc(1, 2, 4, 3);
  auto r = min_cost_flow(net);
  EXPECT_EQ(r.cost, 0);
  EXPECT_EQ(r.flow, (std::vector<std::int64_t>{0, 0}));
}

TEST(MinCostFlow, LowerBoundForcesDetour) {
  FlowNetwork net(3);
  net.supply = {1, 0, -1};
  net.add_arc(0, 2, 1, 0);
  net.add_arc(0, 1, 1, 4, 1);
  net.add_arc(1, 2, 1, 1);
  auto r = min_cost_flow(net);
  EXPECT_EQ(r.cost, 5);
  EXPECT_EQ(r.flow[1], 1);
}

TEST(MinCostFlow, Infeasible) {
  FlowNetwork net(2);
  net.supply = {2, -2};
  net.add_arc(0, 1, 1, 1);
  EXPECT_THROW(min_cost_flow(net), Error);
  FlowNetwork unbalanced(2);
  unbalanced.supply = {1, 0};
  EXPECT_THROW(min_cost_flow(unbalanced), Error);
}

TEST(MinCostFlow, MatchesEnumerationOnRandomNetworks) {
  std::mt19937_64 rng(21);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + trial % 4;
    FlowNetwork net(n);
    int arcs = 2 + trial % 5;
    for (int a = 0; a < arcs; ++a) {
      int u = rng() % n, v = rng() % n;
      if (u == v) v = (u + 1) % n;
      std::int64_t cap = 1 + rng() % 2;
      std::int64_t lower = rng() % 4 == 0 ? 1 : 0;
      net.add_arc(u, v, cap, static_cast<std::int64_t>(rng() % 9), lower);
    }
    int s = rng() % n, t = (s + 1 + rng() % (n - 1)) % n;
    std::int64_t amount = rng() % 3;
    net.supply[s] += amount;
    net.supply[t] -= amount;
    auto expected = brute_force(net);
    if (!expected) {
      // A negative-free network with no feasible flow must be rejected.
      EXPECT_THROW(min_cost_flow(net), Error);
      continue;
    }
    ++feasible;
    auto got = min_cost_flow(net);
    EXPECT_EQ(got.cost, *expected) << "trial " << trial;
  }
  EXPECT_GT(feasible, 100);
}

TEST(Assignment, HungarianMatchesExhaustive) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    int n = trial % 7;
    CostMatrix m(n, std::vector<std::int64_t>(n));
    for (auto& row : m)
      for (auto& x : row) x = static_cast<std::int64_t>(rng() % 20);
    auto h = min_cost_assignment(m);
    auto e = exhaustive_assignment(m);
    EXPECT_EQ(h.cost, e.cost);
    std::int64_t check = 0;
    for (int i = 0; i < n; ++i) check += m[i][h.row_to_col[i]];
    EXPECT_EQ(check, h.cost);
  }
  EXPECT_THROW(min_cost_assignment({{1, 2}}), Error);
}
