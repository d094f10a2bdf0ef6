#include <gtest/gtest.h>

#include <random>

#include "ktaxi/offline.hpp"

using namespace ktaxi;

namespace {

struct Instance {
  WeightedTree tree;
  Configuration init;
  RequestSequence seq;
};

Instance random_instance(std::mt19937_64& rng, int n, int k, int len, int max_w) {
  Instance in;
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v)
    e.push_back({v, std::uniform_int_distribution<Vertex>(0, v - 1)(rng),
                 std::uniform_int_distribution<std::int64_t>(1, max_w)(rng)});
  in.tree = WeightedTree::build(0, e);
  auto pick = [&] { return std::uniform_int_distribution<Vertex>(0, n - 1)(rng); };
  for (int i = 0; i < k; ++i) in.init.push_back(pick());
  while (static_cast<int>(in.seq.size()) < len) {
    if (!in.seq.empty() && rng() % 3 == 0) {
      in.seq.push_back(Request::relocate(in.seq.back().d, pick()));
    } else {
      in.seq.push_back(Request::simple(pick()));
    }
  }
  return in;
}

}  // namespace

TEST(Offline, OccupiedRequestIsFree) {
  auto t = build_hst({1, {1}, 3});
  EXPECT_EQ(optimal_cost_dp(t, {1, 2}, {Request::simple(2)}).cost, 0);
  EXPECT_EQ(optimal_cost_flow(t, {1, 2}, {Request::simple(2)}).cost, 0);
}

TEST(Offline, SingleServerOnPath) {
  std::vector<Edge> e{{1, 0, 2}, {2, 1, 3}, {3, 2, 4}};
  auto t = WeightedTree::build(0, e);
  EXPECT_EQ(optimal_cost_dp(t, {0}, {Request::simple(3)}).cost, 9);
  EXPECT_EQ(optimal_cost_flow(t, {0}, {Request::simple(3)}).cost, 9);
}

TEST(Offline, EmptySequenceWithFixedFinal) {
  auto t = build_hst({1, {1}, 3});
  EXPECT_EQ(optimal_cost_flow(t, {1, 2}, {}, Configuration{2, 1}).cost, 0);
  EXPECT_EQ(optimal_cost_dp(t, {1, 2}, {}, Configuration{1, 2}).cost, 0);
  EXPECT_EQ(optimal_cost_flow(t, {1, 2}, {}, Configuration{1, 3}).cost, 2);
}

TEST(Offline, RelocationIsFree) {
  auto t = build_hst({1, {1}, 3});
  RequestSequence seq{Request::simple(1), Request::relocate(1, 3), Request::simple(3)};
  EXPECT_EQ(optimal_cost_dp(t, {1}, seq).cost, 0);
  EXPECT_EQ(optimal_cost_flow(t, {1}, seq).cost, 0);
}

TEST(Offline, Errors) {
  auto t = build_hst({1, {1}, 3});
  EXPECT_THROW(optimal_cost_dp(t, {1, 2}, {}, Configuration{1}), Error);
  EXPECT_THROW(optimal_cost_flow(t, {1, 2}, {}, Configuration{1}), Error);
  RequestSequence seq;
  for (int i = 0; i < 6; ++i) seq.push_back(Request::simple(1 + i % 3));
  EXPECT_THROW(optimal_cost_dp(t, {0, 0}, seq, std::nullopt, CostModel::Full, 5), Error);
  EXPECT_THROW(optimal_cost_flow(t, {1}, {Request::relocate(1, 2)}), Error);
}

TEST(Offline, FlowMatchesDpOnRandomInstances) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    auto in = random_instance(rng, 2 + trial % 7, 1 + trial % 3, 1 + trial % 8, 3);
    auto dp = optimal_cost_dp(in.tree, in.init, in.seq);
    auto fl = optimal_cost_flow(in.tree, in.init, in.seq);
    ASSERT_EQ(dp.cost, fl.cost) << "trial " << trial;
    auto dist = tree_distance(in.tree);
    EXPECT_EQ(replay_schedule(dist, in.seq, dp.schedule), dp.cost);
    EXPECT_EQ(replay_schedule(dist, in.seq, fl.schedule), fl.cost);
  }
}

TEST(Offline, FixedFinalAndUpwardModels) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    auto in = random_instance(rng, 3 + trial % 6, 1 + trial % 3, 2 + trial % 6, 4);
    Configuration fin;
    for (std::size_t i = 0; i < in.init.size(); ++i) fin.push_back(rng() % in.tree.size());
    auto free_opt = optimal_cost_flow(in.tree, in.init, in.seq).cost;
    auto fixed = optimal_cost_flow(in.tree, in.init, in.seq, fin);
    EXPECT_EQ(fixed.cost, optimal_cost_dp(in.tree, in.init, in.seq, fin).cost);
    EXPECT_GE(fixed.cost, free_opt);
    EXPECT_LE(fixed.cost, free_opt + static_cast<std::int64_t>(fin.size()) * in.tree.diameter());
    Configuration got = fixed.schedule.final_config, want = fin;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
    EXPECT_EQ(replay_schedule(tree_distance(in.tree), in.seq, fixed.schedule), fixed.cost);

    auto up_dp = optimal_cost_dp(in.tree, in.init, in.seq, fin, CostModel::Upward);
    auto up_fl = optimal_cost_flow(in.tree, in.init, in.seq, fin, CostModel::Upward);
    EXPECT_EQ(up_dp.cost, up_fl.cost);
    EXPECT_LE(up_fl.cost, fixed.cost);
    EXPECT_EQ(replay_schedule(tree_distance(in.tree, CostModel::Upward), in.seq, up_fl.schedule),
              up_fl.cost);
  }
}

TEST(Offline, ReplayRejectsBrokenSchedules) {
  auto t = build_hst({1, {1}, 3});
  RequestSequence seq{Request::simple(3)};
  auto r = optimal_cost_flow(t, {1}, seq);
  auto dist = tree_distance(t);
  auto broken = r.schedule;
  broken.moves.clear();
  EXPECT_THROW(replay_schedule(dist, seq, broken), Error);
  broken = r.schedule;
  broken.final_config = {2};
  EXPECT_THROW(replay_schedule(dist, seq, broken), Error);
}
