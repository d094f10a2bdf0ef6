#include <gtest/gtest.h>

#include "ktaxi/forward_adversary.hpp"
#include "ktaxi/offline.hpp"

using namespace ktaxi;

namespace {

class LoweringStrategy : public DualStrategy {
 public:
  std::string name() const override { return "lowering"; }
  std::vector<std::int64_t> respond(const Request&, const std::vector<std::int64_t>& prev) override {
    auto a = prev;
    a[1] -= 1;
    return a;
  }
};

class SteepStrategy : public DualStrategy {
 public:
  std::string name() const override { return "steep"; }
  std::vector<std::int64_t> respond(const Request&, const std::vector<std::int64_t>& prev) override {
    auto a = prev;
    a[2] += 5;
    return a;
  }
};

std::int64_t oracle_opt(const AdversaryTranscript& tr) {
  return optimal_cost_flow(build_hst({1, {1}, 2}), {1}, tr.requests).cost;
}

}  // namespace

TEST(ForwardAdversary, StaticStrategy) {
  auto s = make_static_strategy();
  auto tr = forward_adversary(*s, 40);
  ASSERT_TRUE(tr.feasible) << tr.violation;
  EXPECT_EQ(tr.total_dual, 0);
  // Each gadget forces one leaf-to-leaf trip of length 2.
  EXPECT_EQ(tr.opt, 80);
  EXPECT_EQ(oracle_opt(tr), tr.opt);
  EXPECT_FALSE(first_invalid_relocation(tr.requests));
}

TEST(ForwardAdversary, RaiseRequestedStrategy) {
  auto s = make_raise_requested_strategy();
  auto tr = forward_adversary(*s, 60);
  ASSERT_TRUE(tr.feasible) << tr.violation;
  for (const auto& g : tr.gadgets) {
    EXPECT_LE(g.dual, 0);
    EXPECT_LE(g.cumulative_dual, 0);
  }
  EXPECT_EQ(oracle_opt(tr), tr.opt);
  EXPECT_GE(tr.opt, 60);
}

TEST(ForwardAdversary, RandomStrategies) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = make_random_strategy(seed);
    auto tr = forward_adversary(*s, 50);
    ASSERT_TRUE(tr.feasible) << tr.violation;
    for (const auto& g : tr.gadgets) EXPECT_LE(g.cumulative_dual, 0);
    EXPECT_GE(tr.opt, 25);
  }
}

TEST(ForwardAdversary, InfeasibleStrategiesHalt) {
  LoweringStrategy low;
  auto tr = forward_adversary(low, 10);
  EXPECT_FALSE(tr.feasible);
  EXPECT_NE(tr.violation.find("decreased"), std::string::npos);
  SteepStrategy steep;
  auto tr2 = forward_adversary(steep, 10);
  EXPECT_FALSE(tr2.feasible);
  EXPECT_NE(tr2.violation.find("slope"), std::string::npos);
  EXPECT_LT(tr2.gadgets.size(), 10u);
}

TEST(ForwardAdversary, RepairOnlyRaises) {
  std::vector<std::int64_t> a{0, 5, 0};
  repair_slopes(a);
  EXPECT_EQ(a, (std::vector<std::int64_t>{4, 5, 3}));
}
