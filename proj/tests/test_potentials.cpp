#include <gtest/gtest.h>

#include <random>

#include "ktaxi/dual_certificate.hpp"
#include "ktaxi/instances.hpp"
#include "ktaxi/offline.hpp"
#include "ktaxi/potentials.hpp"

using namespace ktaxi;

TEST(Potentials, KServerSimpleValues) {
  SubdividedTree star(build_hst({1, {1}, 3}));
  EXPECT_EQ(psi_kserver(star, {0, 0, 0}), 0);
  EXPECT_EQ(psi_kserver(star, {1, 2}), 0);
  EXPECT_EQ(psi_kserver(star, {1, 1}), -1);
}

TEST(Potentials, KServerMatchesPairEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    SubdividedTree t(random_weighted_tree(rng, 9, 3, 4));
    Configuration cfg;
    for (int i = 0; i < 4; ++i) cfg.push_back(rng() % t.size());
    std::int64_t brute = 0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        // Deepest common vertex of the two root paths.
        std::int64_t best = 0;
        for (Vertex a = cfg[i];; a = t.parent(a)) {
          if (t.is_ancestor(a, cfg[j])) {
            best = std::max(best, t.depth(a));
          }
          if (a == t.root()) break;
        }
        brute += best;
      }
    }
    EXPECT_EQ(psi_kserver(t, cfg), -brute);
  }
}

TEST(Potentials, LayerHeights) {
  auto hst = build_hst(HstSpec::geometric(3, 3, 2));
  auto l = layer_heights(hst);
  EXPECT_EQ(l.alpha, (std::vector<std::int64_t>{0, 1, 4, 13}));
}

TEST(Potentials, KTaxiAtLeaves) {
  auto base = build_hst(HstSpec::geometric(2, 3, 3));
  SubdividedTree hst(base);
  auto layers = layer_heights(base);
  Configuration cfg(3, base.leaves().front());
  std::int64_t expected = 0;
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) expected += to_int64(c_kd(i, l)) * layers.alpha[l];
  EXPECT_EQ(psi_ktaxi_hst(hst, layers, cfg), expected);
  // Moving a server between leaves keeps the value.
  cfg[1] = base.leaves().back();
  EXPECT_EQ(psi_ktaxi_hst(hst, layers, cfg), expected);
}

TEST(Potentials, KTaxiMidEdgeServer) {
  auto base = build_hst(HstSpec::geometric(3, 2, 2));  // lengths 3, 1
  SubdividedTree hst(base);
  auto layers = layer_heights(base);
  // Lowest-height server stays on a leaf, highest sits mid-edge at height 2.
  Vertex leaf = base.leaves().front();
  Vertex mid = hst.parent(hst.parent(leaf));
  ASSERT_EQ(hst.weighted_height(mid), 2);
  Configuration cfg{leaf, mid};
  // i = 1 (height 2): c_{1,1} * max(alpha_1, min(2, alpha_2)) = 1 * 2.
  EXPECT_EQ(psi_ktaxi_hst(hst, layers, cfg), 2);
}

TEST(Potentials, KServerStepInequalitiesHold) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    InstanceParams p;
    p.family = TreeFamily::RandomWeighted;
    p.k = 1 + seed % 4;
    p.depth = 1 + seed % 3;
    p.vertices = 4 + seed % 8;
    p.relocation_fraction = 0;
    p.length = 20;
    auto sc = random_instance(p, seed);
    auto tr = run_double_coverage(std::make_shared<SubdividedTree>(sc.tree), sc.initial, sc.requests);
    auto rep = check_step_inequalities(tr, PotentialKind::KServer, p.k);
    EXPECT_TRUE(rep.clean) << rep.first_violation;
    auto opt = optimal_cost_flow(sc.tree, sc.initial, sc.requests).cost;
    EXPECT_LE(tr.total_cost(), p.k * opt + pairwise_spread(sc.tree, sc.initial));
  }
}

TEST(Potentials, KTaxiStepInequalitiesHold) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    InstanceParams p;
    p.family = TreeFamily::Hst;
    p.k = 1 + seed % 4;
    p.depth = 1 + seed % 3;
    p.branching = p.k + 1;
    p.length = 30;
    auto sc = random_instance(p, seed);
    auto tr = run_double_coverage(std::make_shared<SubdividedTree>(sc.tree), sc.initial, sc.requests);
    const std::int64_t c = to_int64(c_kd(p.k, p.depth));
    auto rep = check_step_inequalities(tr, PotentialKind::KTaxiHst, c);
    EXPECT_TRUE(rep.clean) << rep.first_violation;
    auto cert = build_certificate_hst(tr);
    auto d = evaluate_dual(cert, tr).total;
    EXPECT_LE(tr.cost_up + rep.psi_final - rep.psi_initial, c * d);
  }
}

TEST(Potentials, MatchingFixture) {
  auto star = build_hst({1, {1}, 4});  // root 0, leaves a..d = 1..4
  EXPECT_EQ(matching_potential(star, {1, 2, 3}, {1, 2, 3}), 0);
  EXPECT_EQ(matching_potential(star, {1, 2, 3}, {2, 3, 4}), 2);
  auto tr = run_double_coverage(std::make_shared<SubdividedTree>(star), {1, 2, 3}, {Request::simple(4)});
  EXPECT_EQ(tr.total_cost(), 4);
  EXPECT_EQ(matching_potential(star, tr.final_config, {2, 3, 4}), 2);
  EXPECT_THROW(matching_potential(star, {1}, {1, 2}), Error);
}
