#include <gtest/gtest.h>

#include "ktaxi/experiment.hpp"

using namespace ktaxi;

namespace {

Report run(ExperimentKind kind, std::vector<GridPoint> grid, int trials, int threads = 4) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.grid = std::move(grid);
  spec.trials = trials;
  spec.seed = 100;
  spec.threads = threads;
  spec.rounds = 30;
  return run_experiment(spec);
}

}  // namespace

TEST(Experiment, LowerBoundReproGrid) {
  Report r = run(ExperimentKind::LowerBoundRepro, {{2, 1}, {2, 2}, {3, 1}, {3, 2}}, 1);
  ASSERT_EQ(r.rows.size(), 4u);
  const std::int64_t expected[] = {3, 7, 5, 15};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(r.rows[i].pass()) << r.rows[i].error;
    EXPECT_EQ(r.rows[i].dc_total, expected[i]);
    EXPECT_EQ(r.rows[i].opt, 1);
  }
}

TEST(Experiment, UpperBoundSweepPasses) {
  Report r = run(ExperimentKind::UpperBoundSweep, {{2, 2}, {3, 3}, {4, 1}}, 20);
  EXPECT_EQ(r.failures(), 0u) << r.to_csv();
}

TEST(Experiment, OtherKindsPass) {
  for (ExperimentKind kind : {ExperimentKind::WeightedSweep, ExperimentKind::KServerSweep,
                              ExperimentKind::OracleCheck, ExperimentKind::DualityAudit,
                              ExperimentKind::ForwardImpossibility}) {
    Report r = run(kind, {{2, 2}, {3, 2}}, 5);
    EXPECT_EQ(r.failures(), 0u) << to_string(kind) << "\n" << r.to_csv();
  }
  Report h = run(ExperimentKind::HstLowerBound, {{2, 2, 3}}, 1);
  EXPECT_EQ(h.failures(), 0u) << h.to_csv();
  Report e = run(ExperimentKind::EmbeddingStudy, {{2, 2}}, 2);
  EXPECT_EQ(e.failures(), 0u) << e.to_csv();
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  Report a = run(ExperimentKind::UpperBoundSweep, {{2, 2}, {3, 2}}, 8, 1);
  Report b = run(ExperimentKind::UpperBoundSweep, {{2, 2}, {3, 2}}, 8, 6);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].trial, i);
    EXPECT_EQ(a.rows[i].scenario_hash.size(), 16u);
  }
}

TEST(Experiment, FailuresAreReportedPerTrial) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::OracleCheck;
  spec.grid = {{3, 2}};
  spec.trials = 3;
  spec.budget = 1;
  Report r = run_experiment(spec);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const TrialRow& row : r.rows) {
    EXPECT_FALSE(row.pass());
    EXPECT_NE(row.error.find("budget"), std::string::npos);
  }
}

TEST(Experiment, SpecValidation) {
  ExperimentSpec spec;
  EXPECT_THROW(run_experiment(spec), Error);
  spec.grid = {{2, 2}};
  spec.trials = 0;
  EXPECT_THROW(run_experiment(spec), Error);
  EXPECT_THROW(parse_experiment_kind("nope"), Error);
  EXPECT_EQ(parse_experiment_kind(to_string(ExperimentKind::DualityAudit)), ExperimentKind::DualityAudit);
}
