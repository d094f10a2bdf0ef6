#include <gtest/gtest.h>

#include <random>

#include "ktaxi/tree.hpp"

using namespace ktaxi;

namespace {

WeightedTree random_tree(std::mt19937_64& rng, int n, int max_w) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) {
    Vertex p = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
    edges.push_back({v, p, std::uniform_int_distribution<std::int64_t>(1, max_w)(rng)});
  }
  return WeightedTree::build(0, edges);
}

std::int64_t brute_distance(const WeightedTree& t, Vertex u, Vertex v) {
  std::vector<std::int64_t> up(t.size(), -1);
  std::int64_t acc = 0;
  for (Vertex w = u;; w = t.parent(w)) {
    up[w] = acc;
    if (w == t.root()) break;
    acc += t.weight(w);
  }
  acc = 0;
  for (Vertex w = v;; w = t.parent(w)) {
    if (up[w] >= 0) return up[w] + acc;
    acc += t.weight(w);
  }
}

}  // namespace

TEST(WeightedTree, SingleEdge) {
  std::vector<Edge> e{{1, 0, 1}};
  auto t = WeightedTree::build(0, e);
  EXPECT_EQ(t.size(), 2);
  EXPECT_EQ(t.depth(1), 1);
  EXPECT_EQ(t.max_depth(), 1);
  EXPECT_EQ(t.lca(1, 1), 1);
  EXPECT_EQ(t.distance(1, 1), 0);
}

TEST(WeightedTree, RejectsMalformedInput) {
  std::vector<Edge> repeated{{1, 0, 1}, {1, 2, 1}, {2, 0, 1}};
  EXPECT_THROW(WeightedTree::build(0, repeated), Error);
  std::vector<Edge> zero{{1, 0, 0}};
  EXPECT_THROW(WeightedTree::build(0, zero), Error);
  std::vector<Edge> cycle{{1, 2, 1}, {2, 1, 1}};
  EXPECT_THROW(WeightedTree::build(0, cycle), Error);
  std::vector<Edge> gap{{2, 0, 1}};
  EXPECT_THROW(WeightedTree::build(0, gap), Error);
  std::vector<Edge> ok{{1, 0, 1}};
  auto t = WeightedTree::build(0, ok);
  EXPECT_THROW(t.depth(7), Error);
}

TEST(WeightedTree, StarHasUnitDepth) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= 4; ++v) e.push_back({v, 0, 1});
  auto t = WeightedTree::build(0, e);
  EXPECT_EQ(t.leaves().size(), 4u);
  EXPECT_EQ(t.combinatorial_height(), 1);
  EXPECT_EQ(t.distance(1, 2), 2);
}

TEST(WeightedTree, DistanceMatchesPathWalk) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = random_tree(rng, 2 + trial % 15, 6);
    for (Vertex u = 0; u < t.size(); ++u) {
      for (Vertex v = 0; v < t.size(); ++v) {
        EXPECT_EQ(t.distance(u, v), brute_distance(t, u, v));
        EXPECT_EQ(t.distance(u, v), t.distance(v, u));
        EXPECT_EQ(t.distance(u, v) == 0, u == v);
        EXPECT_EQ(t.upward_distance(u, v) + t.upward_distance(v, u), t.distance(u, v));
      }
    }
  }
}

TEST(WeightedTree, TriangleInequalityOnSmallTrees) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SubdividedTree s(random_tree(rng, 8, 4));
    if (s.size() > 50) continue;
    for (Vertex a = 0; a < s.size(); ++a)
      for (Vertex b = 0; b < s.size(); ++b)
        for (Vertex c = 0; c < s.size(); ++c)
          EXPECT_LE(s.distance(a, c), s.distance(a, b) + s.distance(b, c));
  }
}

TEST(SubdividedTree, UnitWeightsAreIdentity) {
  std::vector<Edge> e{{1, 0, 1}, {2, 0, 1}, {3, 1, 1}};
  SubdividedTree s(WeightedTree::build(0, e));
  EXPECT_EQ(s.size(), 4);
  for (Vertex v = 0; v < 4; ++v) EXPECT_TRUE(s.is_original(v));
}

TEST(SubdividedTree, LongEdgeGetsInteriorVertices) {
  for (std::int64_t w = 1; w <= 10; ++w) {
    std::vector<Edge> e{{1, 0, w}};
    SubdividedTree s(WeightedTree::build(0, e));
    EXPECT_EQ(s.size(), 2 + (w - 1));
    int short_edges = 0;
    for (Vertex v = 1; v != s.root(); v = s.parent(v)) ++short_edges;
    EXPECT_EQ(short_edges, w);
    EXPECT_EQ(s.depth(1), w);
  }
  std::vector<Edge> e{{1, 0, 3}};
  SubdividedTree s(WeightedTree::build(0, e));
  EXPECT_EQ(s.size() - s.base().size(), 2);
  EXPECT_EQ(s.origin(2).long_child, 1);
  EXPECT_EQ(s.origin(2).offset, 1);
}

TEST(SubdividedTree, PreservesOriginalDistances) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_tree(rng, 9, 5);
    SubdividedTree s(t);
    for (Vertex u = 0; u < t.size(); ++u)
      for (Vertex v = 0; v < t.size(); ++v) EXPECT_EQ(s.distance(u, v), t.distance(u, v));
  }
}

TEST(SubdividedTree, VertexMeasures) {
  HstSpec spec{2, {2, 1}, 2};
  SubdividedTree s(build_hst(spec));
  auto root = s.measures(s.root());
  EXPECT_EQ(root.weighted_depth, 0);
  EXPECT_EQ(root.combinatorial_depth, 0);
  EXPECT_EQ(root.weighted_height, 3);
  for (Vertex leaf : s.base().leaves()) EXPECT_EQ(s.measures(leaf).weighted_height, 0);
  // Mid-point of the weight-2 edge above vertex 1.
  Vertex mid = s.parent(1);
  ASSERT_FALSE(s.is_original(mid));
  auto m = s.measures(mid);
  EXPECT_EQ(m.weighted_depth, 1);
  EXPECT_EQ(m.combinatorial_depth, 1);
}

TEST(SubdividedTree, HeightNeedsUniformLeafDepth) {
  std::vector<Edge> e{{1, 0, 1}, {2, 0, 2}};
  SubdividedTree s(WeightedTree::build(0, e));
  EXPECT_THROW(s.weighted_height(0), Error);
  EXPECT_FALSE(s.measures(0).weighted_height.has_value());
}

TEST(Hst, StarFixture) {
  auto t = build_hst({1, {1}, 4});
  EXPECT_EQ(t.leaves().size(), 4u);
  EXPECT_TRUE(is_hst(t));
}

TEST(Hst, GeometricRootLeafDistance) {
  auto t = build_hst(HstSpec::geometric(3, 2, 3));
  EXPECT_EQ(t.depth(t.leaves().front()), 4);
  EXPECT_TRUE(is_hst(t, 3));
  EXPECT_FALSE(is_hst(t, 2));
  for (std::int64_t a = 2; a <= 5; ++a) {
    for (int d = 1; d <= 5; ++d) {
      std::int64_t p = 1;
      for (int i = 0; i < d; ++i) p *= a;
      EXPECT_EQ(hst_root_leaf_distance(a, d), (p - 1) / (a - 1));
      EXPECT_EQ(build_hst(HstSpec::geometric(a, d, 2)).max_depth(), hst_root_leaf_distance(a, d));
    }
  }
}

TEST(Hst, LeavesInDistinctTopSubtrees) {
  auto t = build_hst({2, {5, 2}, 2});
  // Leaves 3 (under 1) and 5 (under 2).
  EXPECT_EQ(t.distance(3, 5), 2 * (5 + 2));
  EXPECT_THROW(build_hst({0, {}, 2}), Error);
  EXPECT_THROW(build_hst({1, {1}, 0}), Error);
}
