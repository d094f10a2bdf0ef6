#include "ktaxi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "ktaxi/dual_certificate.hpp"
#include "ktaxi/forward_adversary.hpp"
#include "ktaxi/lower_bounds.hpp"
#include "ktaxi/potentials.hpp"

namespace ktaxi {
namespace {

std::shared_ptr<const SubdividedTree> share(const WeightedTree& t) {
  return std::make_shared<const SubdividedTree>(t);
}

template <typename F>
TrialRow guarded(TrialRow row, F&& body) {
  try {
    body(row);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

void fill_costs(TrialRow& row, const Trace& tr) {
  row.dc_total = tr.total_cost();
  row.dc_up = tr.cost_up;
  row.dc_down = tr.cost_down;
}

TrialRow start(const std::string& kind, const Scenario* s) {
  TrialRow row;
  row.kind = kind;
  if (s) {
    row.scenario_hash = scenario_hash(*s);
    row.k = s->k();
  }
  return row;
}

}  // namespace

bool TrialRow::pass() const {
  return error.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

TrialRow audit_hst_upper(const Scenario& s, int d) {
  return guarded(start("hst_upper", &s), [&](TrialRow& row) {
    row.d = d;
    Trace tr = run_double_coverage(share(s.tree), s.initial, s.requests);
    fill_costs(row, tr);
    row.check("trace_valid", verify_trace(tr).clean);
    AltitudeCertificate cert = build_certificate_hst(tr);
    DualEvaluation eval = evaluate_dual(cert, tr);
    row.dual = eval.total;
    row.check("feasible", verify_feasibility(cert, *tr.tree).clean);
    row.check("event_guarantees", check_guarantees(cert, tr, eval).clean);
    row.c = to_int64(c_kd(s.k(), d));
    PotentialReport pot = check_step_inequalities(tr, PotentialKind::KTaxiHst, row.c);
    row.check("step_inequalities", pot.clean);
    row.check("amortized_bound", tr.cost_up + pot.psi_final - pot.psi_initial <= row.c * eval.total);
    row.opt_fixed = optimal_cost_flow(tr.tree->unit(), s.initial, s.requests, tr.final_config, CostModel::Upward).cost;
    row.check("weak_duality", weak_duality_check(eval, row.opt_fixed).holds);
  });
}

TrialRow audit_weighted_upper(const Scenario& s, int d) {
  return guarded(start("weighted_upper", &s), [&](TrialRow& row) {
    row.d = d;
    Trace tr = run_double_coverage(share(s.tree), s.initial, s.requests);
    fill_costs(row, tr);
    row.check("trace_valid", verify_trace(tr).clean);
    AltitudeCertificate cert = build_certificate_weighted(tr, d);
    row.c = to_int64(cert.scale());
    DualEvaluation eval = evaluate_dual(cert, tr);
    row.dual = eval.total;
    FeasibilityReport feas = verify_feasibility(cert, *tr.tree);
    row.check("within_bands", feas.clean);
    row.check("scaled_slopes_in_unit_range", feas.scaled_feasible);
    row.check("moves_paid_by_dual", check_guarantees(cert, tr, eval).clean);
    row.check("cost_below_dual", tr.total_cost() <= eval.total);
    row.opt_fixed = optimal_cost_flow(tr.tree->unit(), s.initial, s.requests, tr.final_config).cost;
    row.check("weak_duality", weak_duality_check(eval, row.opt_fixed, cert.scale()).holds);
  });
}

TrialRow audit_kserver(const Scenario& s) {
  return guarded(start("kserver", &s), [&](TrialRow& row) {
    if (std::any_of(s.requests.begin(), s.requests.end(), [](const Request& r) { return !r.is_simple(); })) {
      throw Error("k-server audit needs simple requests only");
    }
    Trace tr = run_double_coverage(share(s.tree), s.initial, s.requests);
    fill_costs(row, tr);
    row.c = s.k();
    row.check("trace_valid", verify_trace(tr).clean);
    row.check("step_inequalities", check_step_inequalities(tr, PotentialKind::KServer, row.c).clean);
    row.opt = optimal_cost_flow(s.tree, s.initial, s.requests).cost;
    row.check("competitive_bound", tr.total_cost() <= row.c * row.opt + pairwise_spread(s.tree, s.initial));
  });
}

TrialRow audit_oracles(const Scenario& s, std::int64_t budget) {
  return guarded(start("oracles", &s), [&](TrialRow& row) {
    const std::int64_t flow = optimal_cost_flow(s.tree, s.initial, s.requests).cost;
    const OfflineResult dp = optimal_cost_dp(s.tree, s.initial, s.requests, std::nullopt, CostModel::Full, budget);
    row.opt = flow;
    row.check("free_final", flow == dp.cost);
    row.check("dp_schedule_replays", replay_schedule(tree_distance(s.tree), s.requests, dp.schedule) == dp.cost);
    Configuration fixed(s.initial.rbegin(), s.initial.rend());
    for (CostModel model : {CostModel::Full, CostModel::Upward}) {
      const std::int64_t f = optimal_cost_flow(s.tree, s.initial, s.requests, fixed, model).cost;
      const std::int64_t g = optimal_cost_dp(s.tree, s.initial, s.requests, fixed, model, budget).cost;
      row.check(model == CostModel::Full ? "fixed_final" : "fixed_final_upward", f == g);
      if (model == CostModel::Full) row.opt_fixed = f;
    }
  });
}

TrialRow audit_tree_lowerbound(int k, int d) {
  TrialRow row = start("tree_lowerbound", nullptr);
  row.k = k;
  row.d = d;
  return guarded(row, [&](TrialRow& r) {
    LowerBoundInstance inst = gen_tree_lowerbound(k, d);
    r.scenario_hash = scenario_hash({inst.tree, inst.init_online, inst.seq});
    r.check("sequence_valid", !first_invalid_relocation(inst.seq).has_value());
    Trace tr = run_double_coverage(share(inst.tree), inst.init_online, inst.seq);
    fill_costs(r, tr);
    r.c = to_int64(tree_lowerbound_formula(k, d));
    r.check("trace_valid", verify_trace(tr).clean);
    r.check("dc_equals_formula", tr.total_cost() == r.c);
    r.opt = optimal_cost_flow(inst.tree, inst.init_offline, inst.seq).cost;
    r.check("opt_is_one", r.opt == 1);
    r.check("schedule_costs_one", replay_schedule(tree_distance(inst.tree), inst.seq, inst.offline_schedule) == 1);
  });
}

TrialRow audit_hst_lowerbound(int k, int d, std::int64_t alpha) {
  TrialRow row = start("hst_lowerbound", nullptr);
  row.k = k;
  row.d = d;
  row.alpha = alpha;
  return guarded(row, [&](TrialRow& r) {
    LowerBoundInstance inst = gen_hst_lowerbound(k, d, alpha);
    r.scenario_hash = scenario_hash({inst.tree, inst.init_online, inst.seq});
    r.check("sequence_valid", !first_invalid_relocation(inst.seq).has_value());
    Trace tr = run_double_coverage(share(inst.tree), inst.init_online, inst.seq);
    fill_costs(r, tr);
    r.c = inst.predicted_dc;
    r.check("trace_valid", verify_trace(tr).clean);
    r.check("dc_up_at_least_bound", tr.cost_up >= inst.predicted_dc);
    r.opt = replay_schedule(tree_distance(inst.tree, CostModel::Upward), inst.seq, inst.offline_schedule);
    r.check("offline_up_at_most_w", r.opt <= hst_root_leaf_distance(alpha, d));
    r.check("extra_server_free",
            replay_schedule(tree_distance(inst.tree), inst.seq, *inst.extra_server_schedule) == 0);
  });
}

TrialRow audit_forward(std::uint64_t seed, int rounds) {
  TrialRow row = start("forward", nullptr);
  row.seed = seed;
  return guarded(row, [&](TrialRow& r) {
    auto strategy = make_random_strategy(seed);
    AdversaryTranscript tx = forward_adversary(*strategy, rounds);
    r.dual = tx.total_dual;
    r.check("strategy_feasible", tx.feasible);
    r.check("all_rounds_played", static_cast<int>(tx.gadgets.size()) == rounds);
    bool nonpositive = true;
    for (const GadgetRecord& g : tx.gadgets) nonpositive = nonpositive && g.cumulative_dual <= 0;
    r.check("cumulative_dual_nonpositive", nonpositive);
    r.opt = optimal_cost_flow(build_hst({1, {1}, 2}), {1}, tx.requests).cost;
    r.check("opt_matches_transcript", r.opt == tx.opt);
    r.check("opt_at_least_half_rounds", 2 * r.opt >= rounds);
  });
}

TrialRow audit_duality(const Scenario& s, int d) {
  return guarded(start("duality", &s), [&](TrialRow& row) {
    row.d = d;
    Trace tr = run_double_coverage(share(s.tree), s.initial, s.requests);
    fill_costs(row, tr);
    AltitudeCertificate cert = build_certificate_hst(tr);
    DualEvaluation eval = evaluate_dual(cert, tr);
    row.dual = eval.total;
    LambdaB lb = transform_to_lambda_b(cert, tr);
    row.check("objectives_agree", lb.objective == eval.total);
    AltitudeCertificate back = certificate_from_json(certificate_to_json(cert));
    row.check("export_round_trip", evaluate_dual(back, tr).total == eval.total);
    row.opt_fixed = optimal_cost_flow(tr.tree->unit(), s.initial, s.requests, tr.final_config, CostModel::Upward).cost;
    row.check("weak_duality", weak_duality_check(eval, row.opt_fixed).holds);
  });
}

TrialRow audit_embedding(int n, int d, std::int64_t max_weight, std::uint64_t seed, int trials) {
  TrialRow row = start("embedding", nullptr);
  row.d = d;
  row.seed = seed;
  return guarded(row, [&](TrialRow& r) {
    std::mt19937_64 rng(seed);
    MetricSpace m = random_metric(n, max_weight, rng);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < trials; ++i) seeds.push_back(seed * 1000003 + i);
    DistortionStats st = distortion_stats(m, d, seeds);
    r.alpha = embedding_alpha(m, d);
    r.check("non_contracting", st.min >= 1.0);
    r.check("distortion_within_calibration", st.distortion <= stretch_bound(m, d));
  });
}

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames{
    {ExperimentKind::UpperBoundSweep, "upper-hst"},     {ExperimentKind::WeightedSweep, "upper-weighted"},
    {ExperimentKind::KServerSweep, "kserver"},          {ExperimentKind::OracleCheck, "oracles"},
    {ExperimentKind::LowerBoundRepro, "lowerbound-tree"}, {ExperimentKind::HstLowerBound, "lowerbound-hst"},
    {ExperimentKind::DualityAudit, "duality"},          {ExperimentKind::EmbeddingStudy, "embedding"},
    {ExperimentKind::ForwardImpossibility, "forward"}};

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [kind, n] : kKindNames) {
    if (n == name) return kind;
  }
  throw Error("unknown experiment kind " + name);
}

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, n] : kKindNames) {
    if (k == kind) return n;
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  if (grid.empty()) throw Error("experiment grid is empty");
  if (trials < 1) throw Error("trials must be positive");
  if (budget < 1) throw Error("budget must be positive");
  if (rounds < 1) throw Error("rounds must be positive");
  for (const GridPoint& g : grid) {
    if (g.k < 1 || g.d < 1 || g.alpha < 1) throw Error("grid point out of range");
  }
}

Scenario sweep_scenario(ExperimentKind kind, const GridPoint& g, std::size_t length, std::uint64_t seed) {
  InstanceParams p;
  p.k = g.k;
  p.depth = g.d;
  p.length = length;
  switch (kind) {
    case ExperimentKind::UpperBoundSweep:
    case ExperimentKind::DualityAudit:
      p.family = TreeFamily::Hst;
      p.branching = g.k + 1;
      p.alpha = g.alpha;
      break;
    case ExperimentKind::KServerSweep:
      p.family = TreeFamily::RandomWeighted;
      p.vertices = 4 + static_cast<int>(seed % 9);
      p.relocation_fraction = 0;
      break;
    case ExperimentKind::OracleCheck:
      p.family = TreeFamily::RandomWeighted;
      p.vertices = std::max(g.d + 1, 3 + static_cast<int>(seed % 6));
      p.max_weight = 3;
      p.length = std::min<std::size_t>(length, 8);
      break;
    default:
      p.family = TreeFamily::RandomWeighted;
      p.vertices = std::max(g.d + 1, 4 + static_cast<int>(seed % 8));
      break;
  }
  return random_instance(p, seed);
}

Report run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  Report report;
  report.spec = spec;
  const std::size_t total = spec.grid.size() * static_cast<std::size_t>(spec.trials);
  report.rows.resize(total);

  auto run_one = [&](std::size_t index) {
    const GridPoint& g = spec.grid[index / spec.trials];
    const std::uint64_t seed = spec.seed + index;
    TrialRow row;
    switch (spec.kind) {
      case ExperimentKind::UpperBoundSweep:
        row = audit_hst_upper(sweep_scenario(spec.kind, g, spec.length, seed), g.d);
        break;
      case ExperimentKind::WeightedSweep:
        row = audit_weighted_upper(sweep_scenario(spec.kind, g, spec.length, seed), g.d);
        break;
      case ExperimentKind::KServerSweep:
        row = audit_kserver(sweep_scenario(spec.kind, g, spec.length, seed));
        break;
      case ExperimentKind::OracleCheck:
        row = audit_oracles(sweep_scenario(spec.kind, g, spec.length, seed), spec.budget);
        break;
      case ExperimentKind::DualityAudit:
        row = audit_duality(sweep_scenario(spec.kind, g, spec.length, seed), g.d);
        break;
      case ExperimentKind::LowerBoundRepro:
        row = audit_tree_lowerbound(g.k, g.d);
        break;
      case ExperimentKind::HstLowerBound:
        row = audit_hst_lowerbound(g.k, g.d, g.alpha);
        break;
      case ExperimentKind::EmbeddingStudy:
        row = audit_embedding(16, g.d, 50, seed, 100);
        break;
      case ExperimentKind::ForwardImpossibility:
        row = audit_forward(seed, spec.rounds);
        break;
    }
    row.trial = index;
    row.seed = seed;
    if (row.k == 0) row.k = g.k;
    if (row.d == 0) row.d = g.d;
    if (row.alpha == 0) row.alpha = g.alpha;
    report.rows[index] = std::move(row);
  };

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) run_one(i);
    });
  }
  for (auto& t : pool) t.join();
  return report;
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TrialRow& r) { return !r.pass(); }));
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "kind,trial,seed,scenario_hash,k,d,alpha,dc_total,dc_up,dc_down,opt,opt_fixed,dual,c,pass,failed_checks,error\n";
  for (const TrialRow& r : rows) {
    std::string failed;
    for (const auto& [name, ok] : r.checks) {
      if (!ok) failed += (failed.empty() ? "" : ";") + name;
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << r.kind << ',' << r.trial << ',' << r.seed << ',' << r.scenario_hash << ',' << r.k << ',' << r.d << ','
        << r.alpha << ',' << r.dc_total << ',' << r.dc_up << ',' << r.dc_down << ',' << r.opt << ','
        << r.opt_fixed << ',' << r.dual << ',' << r.c << ',' << (r.pass() ? 1 : 0) << ',' << failed << ','
        << err << '\n';
  }
  return out.str();
}

Json Report::to_json() const {
  Json rows_json = Json::array();
  for (const TrialRow& r : rows) {
    Json checks = Json::object();
    for (const auto& [name, ok] : r.checks) checks[name] = ok;
    Json row{{"kind", r.kind},         {"trial", r.trial},       {"seed", r.seed},   {"scenario_hash", r.scenario_hash},
             {"k", r.k},               {"d", r.d},               {"alpha", r.alpha}, {"dc_total", r.dc_total},
             {"dc_up", r.dc_up},       {"dc_down", r.dc_down},   {"opt", r.opt},     {"opt_fixed", r.opt_fixed},
             {"dual", r.dual},         {"c", r.c},               {"checks", checks}, {"pass", r.pass()}};
    if (!r.error.empty()) row["error"] = r.error;
    rows_json.push_back(std::move(row));
  }
  Json grid = Json::array();
  for (const GridPoint& g : spec.grid) grid.push_back({{"k", g.k}, {"d", g.d}, {"alpha", g.alpha}});
  return {{"format", "report/v1"},
          {"kind", to_string(spec.kind)},
          {"grid", grid},
          {"trials", spec.trials},
          {"seed", spec.seed},
          {"rows", rows_json},
          {"summary", {{"rows", rows.size()}, {"failures", failures()}}}};
}

}  // namespace ktaxi
