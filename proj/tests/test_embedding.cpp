#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ktaxi/embedding.hpp"
#include "ktaxi/offline.hpp"

using namespace ktaxi;

namespace {

MetricSpace uniform_metric(int n) {
  std::vector<std::int64_t> d(n * n, 1);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    d[i * n + i] = 0;
    names.push_back("u" + std::to_string(i));
  }
  return MetricSpace(names, d);
}

std::vector<std::uint64_t> seed_range(std::uint64_t from, int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(from + i);
  return s;
}

RequestSequence random_metric_sequence(int n, int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pt(0, n - 1);
  std::bernoulli_distribution reloc(0.3);
  RequestSequence seq;
  for (int i = 0; i < len; ++i) {
    if (!seq.empty() && reloc(rng)) seq.push_back(Request::relocate(seq.back().d, pt(rng)));
    else seq.push_back(Request::simple(pt(rng)));
  }
  return seq;
}

}  // namespace

TEST(Metric, RejectsNonMetrics) {
  EXPECT_THROW(MetricSpace({"a", "b"}, {0, 1, 2, 0}), Error);
  EXPECT_THROW(MetricSpace({"a", "b"}, {0, 0, 0, 0}), Error);
  EXPECT_THROW(MetricSpace({"a", "b", "c"}, {0, 1, 5, 1, 0, 1, 5, 1, 0}), Error);
  EXPECT_THROW(MetricSpace({"a"}, {1}), Error);
}

TEST(Metric, RandomMetricIsValid) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) EXPECT_NO_THROW(random_metric(10, 9, rng));
  MetricSpace line = random_line_metric(16, 512, rng);
  EXPECT_DOUBLE_EQ(line.aspect_ratio(), 512.0);
}

TEST(Embedding, TwoPointStar) {
  MetricSpace m({"a", "b"}, {0, 1, 1, 0});
  HstEmbedding e = frt_embed(m, 1, 5);
  EXPECT_EQ(e.hst.combinatorial_height(), 1);
  EXPECT_EQ(e.hst.leaves().size(), 2u);
  EXPECT_GE(e.tree_distance(0, 1), 1);
}

TEST(Embedding, SinglePoint) {
  MetricSpace m({"a"}, {0});
  HstEmbedding e = frt_embed(m, 2, 1);
  EXPECT_EQ(e.hst.leaves().size(), 1u);
}

TEST(Embedding, UniformMetricDepthOne) {
  MetricSpace m = uniform_metric(6);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    HstEmbedding e = frt_embed(m, 1, seed);
    const std::int64_t first = e.tree_distance(0, 1);
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) EXPECT_EQ(e.tree_distance(a, b), first);
    }
  }
}

TEST(Embedding, StructureAndDeterminism) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; ++d) {
    MetricSpace m = random_metric(12, 30, rng);
    HstEmbedding e = frt_embed(m, d, 42);
    EXPECT_TRUE(is_hst(e.hst, e.alpha));
    EXPECT_EQ(e.hst.combinatorial_height(), d);
    std::int64_t p = 1;
    for (int i = 0; i < d; ++i) p *= e.alpha;
    EXPECT_GE(p * m.min_distance(), m.max_distance());
    HstEmbedding again = frt_embed(m, d, 42);
    EXPECT_EQ(again.leaf_of, e.leaf_of);
    EXPECT_EQ(again.hst.edges().size(), e.hst.edges().size());
  }
}

TEST(Embedding, NeverContracts) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    MetricSpace m = random_metric(10, 50, rng);
    DistortionStats s = distortion_stats(m, 1 + trial % 3, seed_range(trial * 100, 30));
    EXPECT_GE(s.min, 1.0);
  }
}

TEST(Embedding, DistortionWithinCalibratedBound) {
  std::mt19937_64 rng(17);
  for (int d = 1; d <= 3; ++d) {
    for (std::int64_t w : {5, 40, 200}) {
      MetricSpace m = random_metric(16, w, rng);
      DistortionStats s = distortion_stats(m, d, seed_range(0, 300));
      EXPECT_LE(s.distortion, stretch_bound(m, d)) << "d=" << d << " w=" << w;
    }
    MetricSpace line = random_line_metric(16, 1024, rng);
    EXPECT_LE(distortion_stats(line, d, seed_range(0, 300)).distortion, stretch_bound(line, d));
  }
}

TEST(Embedding, EmptySeedList) {
  EXPECT_THROW(distortion_stats(uniform_metric(3), 1, {}), Error);
}

TEST(RunOnMetric, TripsNeverCostMoreThanInTheTree) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    MetricSpace m = random_metric(8, 6, rng);
    const int k = 1 + trial % 3;
    std::vector<int> init;
    for (int i = 0; i < k; ++i) init.push_back(i);
    RequestSequence seq = random_metric_sequence(8, 20, rng);
    MetricRun run = run_on_metric(m, init, seq, 2, trial);
    EXPECT_LE(run.metric_cost, run.hst_cost);
    for (auto [metric_len, tree_len] : run.trips) EXPECT_LE(metric_len, tree_len);
  }
}

TEST(RunOnMetric, HstLeafMetricMatchesDirectSimulation) {
  // Star with unit edges: the embedding of its leaf metric is a scaled copy,
  // so costs agree once divided by the scale.
  MetricSpace m = uniform_metric(4);
  RequestSequence seq{Request::simple(1), Request::simple(2), Request::relocate(2, 3),
                      Request::simple(0)};
  MetricRun run = run_on_metric(m, {0, 1}, seq, 1, 9);
  const std::int64_t scale = run.embedding.alpha;
  EXPECT_EQ(run.hst_cost % scale, 0);
  std::vector<Edge> star;
  for (Vertex v = 1; v <= 4; ++v) star.push_back({v, 0, 1});
  auto direct_tree = std::make_shared<const SubdividedTree>(WeightedTree::build(0, star));
  RequestSequence direct;
  for (const Request& r : seq) {
    direct.push_back(r.is_simple() ? Request::simple(r.s + 1) : Request::relocate(r.s + 1, r.d + 1));
  }
  Trace tr = run_double_coverage(direct_tree, {1, 2}, direct);
  EXPECT_EQ(run.hst_cost / scale, tr.total_cost());
  EXPECT_EQ(run.metric_cost * 2, tr.total_cost());
}

TEST(RunOnMetric, RejectsUnknownPoints) {
  MetricSpace m = uniform_metric(3);
  EXPECT_THROW(run_on_metric(m, {0}, {Request::simple(5)}, 1, 0), Error);
  EXPECT_THROW(run_on_metric(m, {7}, {Request::simple(1)}, 1, 0), Error);
}

TEST(RunOnMetric, RatioBelowCalibratedBound) {
  std::mt19937_64 rng(29);
  const int k = 2, d = 2;
  for (int trial = 0; trial < 5; ++trial) {
    MetricSpace m = random_metric(12, 20, rng);
    RequestSequence seq = random_metric_sequence(12, 40, rng);
    const std::vector<int> init{0, 1};
    DistanceFn dist = [&](Vertex a, Vertex b) { return m(a, b); };
    const std::int64_t opt = optimal_cost_flow(dist, init, seq).cost;
    double total = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) total += static_cast<double>(run_on_metric(m, init, seq, d, s).metric_cost);
    const double ratio = total / seeds / static_cast<double>(std::max<std::int64_t>(opt, 1));
    EXPECT_LE(ratio, std::pow(k, d) * stretch_bound(m, d));
  }
}
