#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ktaxi/instances.hpp"
#include "ktaxi/io.hpp"

namespace ktaxi {

struct TrialRow {
  std::string kind;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string scenario_hash;
  int k = 0;
  int d = 0;
  std::int64_t alpha = 0;
  std::int64_t dc_total = 0;
  std::int64_t dc_up = 0;
  std::int64_t dc_down = 0;
  std::int64_t opt = 0;
  std::int64_t opt_fixed = 0;
  std::int64_t dual = 0;
  std::int64_t c = 0;
  std::vector<std::pair<std::string, bool>> checks;
  std::string error;  // set when the trial threw

  bool pass() const;
  void check(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
};

// Single-trial audits. None of them throws; failures land in the row.
TrialRow audit_hst_upper(const Scenario& s, int d);
TrialRow audit_weighted_upper(const Scenario& s, int d);
TrialRow audit_kserver(const Scenario& s);
TrialRow audit_oracles(const Scenario& s, std::int64_t budget = kDefaultStateBudget);
TrialRow audit_tree_lowerbound(int k, int d);
TrialRow audit_hst_lowerbound(int k, int d, std::int64_t alpha);
TrialRow audit_forward(std::uint64_t seed, int rounds);
TrialRow audit_duality(const Scenario& s, int d);
TrialRow audit_embedding(int n, int d, std::int64_t max_weight, std::uint64_t seed, int trials);

enum class ExperimentKind { UpperBoundSweep, WeightedSweep, KServerSweep, OracleCheck, LowerBoundRepro,
                            HstLowerBound, DualityAudit, EmbeddingStudy, ForwardImpossibility };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

struct GridPoint {
  int k = 2;
  int d = 2;
  std::int64_t alpha = 2;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::UpperBoundSweep;
  std::vector<GridPoint> grid;
  int trials = 1;            // per grid point
  std::uint64_t seed = 1;
  std::size_t length = 30;   // requests per random scenario
  int rounds = 100;          // forward-impossibility gadgets
  std::int64_t budget = kDefaultStateBudget;
  int threads = 0;           // 0: hardware concurrency

  void validate() const;
};

struct Report {
  ExperimentSpec spec;
  std::vector<TrialRow> rows;  // ordered by trial index

  std::size_t failures() const;
  std::string to_csv() const;
  Json to_json() const;
};

// Trials run on a bounded worker pool; rows come back in trial order.
Report run_experiment(const ExperimentSpec& spec);

// Scenario used by trial `index` of the sweep kinds.
Scenario sweep_scenario(ExperimentKind kind, const GridPoint& g, std::size_t length, std::uint64_t seed);

}  // namespace ktaxi
