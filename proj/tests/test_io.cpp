#include <gtest/gtest.h>

#include "ktaxi/io.hpp"

using namespace ktaxi;

TEST(Io, TreeRoundTrip) {
  std::vector<Edge> edges{{1, 0, 2}, {2, 0, 3}, {3, 1, 1}};
  WeightedTree t = WeightedTree::build(0, edges, {"r", "a", "b", "c"});
  WeightedTree back = tree_from_json(tree_to_json(t));
  EXPECT_EQ(back.size(), t.size());
  EXPECT_EQ(back.distance(3, 2), t.distance(3, 2));
  EXPECT_EQ(back.label(3), "c");
}

TEST(Io, ScenarioRoundTripAndHash) {
  InstanceParams p;
  p.k = 3;
  Scenario s = random_instance(p, 77);
  Json j = scenario_to_json(s);
  Scenario back = scenario_from_json(j);
  EXPECT_EQ(back.initial, s.initial);
  EXPECT_EQ(back.requests, s.requests);
  EXPECT_EQ(scenario_hash(back), scenario_hash(s));
  EXPECT_EQ(scenario_hash(s).size(), 16u);
  EXPECT_NE(scenario_hash(random_instance(p, 78)), scenario_hash(s));
  EXPECT_EQ(scenario_to_json(random_instance(p, 77)).dump(), j.dump());
}

TEST(Io, RejectsWrongFormatsAndBadRequests) {
  InstanceParams p;
  Json j = scenario_to_json(random_instance(p, 1));
  Json wrong = j;
  wrong["format"] = "scenario/v2";
  EXPECT_THROW(scenario_from_json(wrong), Error);
  Json bad = j;
  bad["requests"] = Json::array({{{"type", "relocate"}, {"s", 1}, {"d", 2}}});
  EXPECT_THROW(scenario_from_json(bad), Error);
  Json missing = j;
  missing.erase("tree");
  EXPECT_THROW(scenario_from_json(missing), Error);
  EXPECT_THROW(tree_from_json(Json{{"format", "tree/v1"}, {"root", 0}, {"edges", {{1, 0}}}}), Error);
}

TEST(Io, CertificateRoundTrip) {
  InstanceParams p;
  p.family = TreeFamily::RandomWeighted;
  p.depth = 2;
  Scenario s = random_instance(p, 5);
  Trace tr = run_double_coverage(std::make_shared<const SubdividedTree>(s.tree), s.initial, s.requests);
  for (const AltitudeCertificate& c : {build_certificate_weighted(tr, 2)}) {
    AltitudeCertificate back = certificate_from_json(certificate_to_json(c));
    EXPECT_EQ(back.mode, c.mode);
    EXPECT_EQ(back.base, c.base);
    EXPECT_EQ(back.scale(), c.scale());
    ASSERT_EQ(back.reverse_events.size(), c.reverse_events.size());
    EXPECT_EQ(evaluate_dual(back, tr).total, evaluate_dual(c, tr).total);
  }
}

TEST(Io, TraceExportShape) {
  InstanceParams p;
  Scenario s = random_instance(p, 9);
  Trace tr = run_double_coverage(std::make_shared<const SubdividedTree>(s.tree), s.initial, s.requests);
  Json j = trace_to_json(tr);
  EXPECT_EQ(j["format"], "trace/v1");
  EXPECT_EQ(j["events"].size(), s.requests.size());
  EXPECT_EQ(j["cost_up"].get<std::int64_t>(), tr.cost_up);
}

TEST(Io, MetricRoundTrip) {
  MetricSpace m({"a", "b", "c"}, {0, 2, 3, 2, 0, 1, 3, 1, 0});
  MetricSpace back = metric_from_json(metric_to_json(m));
  EXPECT_EQ(back.matrix(), m.matrix());
  EXPECT_THROW(metric_from_json(Json{{"format", "metric/v1"}, {"points", {"a"}}, {"dist", {0, 1}}}), Error);
}
