// Command-line front end: simulation, oracles, certificates, lower bounds,
// embeddings and experiment sweeps.
#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "ktaxi/dual_certificate.hpp"
#include "ktaxi/experiment.hpp"
#include "ktaxi/io.hpp"
#include "ktaxi/lower_bounds.hpp"
#include "ktaxi/potentials.hpp"

using namespace ktaxi;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::int64_t budget = kDefaultStateBudget;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) std::cout << text;
  else write_text_file(g.out, text);
}

void emit_json(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

// Simple "key,value" table for the csv format of single-result commands.
void emit_table(const Globals& g, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream s;
  s << "key,value\n";
  for (const auto& [k, v] : rows) s << k << ',' << v << '\n';
  emit(g, s.str());
}

TreeFamily parse_family(const std::string& name) {
  if (name == "hst") return TreeFamily::Hst;
  if (name == "kary") return TreeFamily::UnweightedKary;
  if (name == "weighted") return TreeFamily::RandomWeighted;
  throw Error("unknown tree family " + name);
}

std::vector<GridPoint> parse_grid(const std::string& text) {
  std::vector<GridPoint> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    GridPoint g;
    char sep = 0;
    std::stringstream is(item);
    if (!(is >> g.k >> sep >> g.d) || sep != ':') throw Error("grid entry must be k:d or k:d:alpha, got " + item);
    if (is >> sep) {
      if (sep != ':' || !(is >> g.alpha)) throw Error("bad alpha in grid entry " + item);
    }
    grid.push_back(g);
  }
  return grid;
}

struct ScenarioSource {
  std::string path;
  std::string family = "hst";
  int k = 2;
  int d = 2;
  std::size_t length = 20;
  double relocations = 0.3;

  void add(CLI::App* app) {
    app->add_option("--scenario", path, "scenario/v1 file; a random scenario is generated when absent");
    app->add_option("--family", family, "random scenario tree family: hst | kary | weighted");
    app->add_option("--k", k, "servers for a random scenario");
    app->add_option("--d", d, "tree depth for a random scenario");
    app->add_option("--length", length, "requests in a random scenario");
    app->add_option("--relocations", relocations, "fraction of relocation requests");
  }

  Scenario load(std::uint64_t seed) const {
    if (!path.empty()) return scenario_from_json(read_json_file(path));
    InstanceParams p;
    p.family = parse_family(family);
    p.k = k;
    p.depth = d;
    p.branching = k + 1;
    p.length = length;
    p.relocation_fraction = relocations;
    return random_instance(p, seed);
  }
};

int tree_depth(const Scenario& s) { return s.tree.combinatorial_height(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-taxi / k-server Double Coverage toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for generated data")->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--budget", g.budget, "state budget of the exhaustive oracle")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "run Double Coverage and export the trace");
  ScenarioSource sim_src;
  sim_src.add(sim);
  std::string sim_scenario_out;
  sim->add_option("--emit-scenario", sim_scenario_out, "also write the scenario used");
  sim->callback([&] {
    Scenario s = sim_src.load(g.seed);
    if (!sim_scenario_out.empty()) write_text_file(sim_scenario_out, scenario_to_json(s).dump(2) + "\n");
    Trace tr = run_double_coverage(std::make_shared<const SubdividedTree>(s.tree), s.initial, s.requests);
    const TraceReport rep = verify_trace(tr);
    if (g.format == "csv") {
      emit_table(g, {{"scenario_hash", scenario_hash(s)},
                     {"cost_total", std::to_string(tr.total_cost())},
                     {"cost_up", std::to_string(tr.cost_up)},
                     {"cost_down", std::to_string(tr.cost_down)},
                     {"small_steps", std::to_string(tr.step_count())},
                     {"trace_valid", rep.clean ? "1" : "0"}});
    } else {
      Json j = trace_to_json(tr);
      j["scenario_hash"] = scenario_hash(s);
      j["trace_valid"] = rep.clean;
      emit_json(g, j);
    }
    if (!rep.clean) throw Error("trace verification failed: " + rep.first_violation);
  });

  // offline
  auto* off = app.add_subcommand("offline", "optimal offline cost of a scenario");
  ScenarioSource off_src;
  off_src.add(off);
  std::string off_method = "flow";
  bool off_upward = false;
  off->add_option("--method", off_method, "flow or dp")->check(CLI::IsMember({"flow", "dp"}));
  off->add_flag("--upward", off_upward, "charge upward movement only");
  off->callback([&] {
    Scenario s = off_src.load(g.seed);
    const CostModel model = off_upward ? CostModel::Upward : CostModel::Full;
    OfflineResult r = off_method == "flow"
                          ? optimal_cost_flow(s.tree, s.initial, s.requests, std::nullopt, model)
                          : optimal_cost_dp(s.tree, s.initial, s.requests, std::nullopt, model, g.budget);
    if (g.format == "csv") {
      emit_table(g, {{"scenario_hash", scenario_hash(s)}, {"opt_cost", std::to_string(r.cost)}});
    } else {
      emit_json(g, {{"scenario_hash", scenario_hash(s)}, {"opt_cost", r.cost}, {"schedule", schedule_to_json(r.schedule)}});
    }
  });

  // verify-dual
  auto* vd = app.add_subcommand("verify-dual", "build or load an altitude certificate and audit it");
  ScenarioSource vd_src;
  vd_src.add(vd);
  std::string vd_mode = "hst", vd_cert_in, vd_cert_out;
  vd->add_option("--mode", vd_mode, "hst (monotone) or weighted (banded)")->check(CLI::IsMember({"hst", "weighted"}));
  vd->add_option("--cert", vd_cert_in, "dualcert/v1 file to audit instead of building one");
  vd->add_option("--emit-cert", vd_cert_out, "write the certificate as dualcert/v1");
  vd->callback([&] {
    Scenario s = vd_src.load(g.seed);
    Trace tr = run_double_coverage(std::make_shared<const SubdividedTree>(s.tree), s.initial, s.requests);
    const int d = tree_depth(s);
    AltitudeCertificate cert = !vd_cert_in.empty() ? certificate_from_json(read_json_file(vd_cert_in))
                               : vd_mode == "hst"  ? build_certificate_hst(tr)
                                                   : build_certificate_weighted(tr, d);
    if (!vd_cert_out.empty()) write_text_file(vd_cert_out, certificate_to_json(cert).dump(2) + "\n");
    DualEvaluation eval = evaluate_dual(cert, tr);
    FeasibilityReport feas = verify_feasibility(cert, *tr.tree);
    GuaranteeReport guar = check_guarantees(cert, tr, eval);
    const CostModel model = cert.mode == CertMode::Monotone ? CostModel::Upward : CostModel::Full;
    const std::int64_t opt = optimal_cost_flow(tr.tree->unit(), s.initial, s.requests, tr.final_config, model).cost;
    WeakDualityReport wd = weak_duality_check(eval, opt, cert.scale());
    const bool ok = feas.clean && feas.scaled_feasible && guar.clean && wd.holds;
    if (g.format == "csv") {
      emit_table(g, {{"dual", std::to_string(eval.total)},
                     {"opt_fixed_final", std::to_string(opt)},
                     {"scale", cert.scale().str()},
                     {"feasible", feas.clean ? "1" : "0"},
                     {"scaled_feasible", feas.scaled_feasible ? "1" : "0"},
                     {"guarantees", guar.clean ? "1" : "0"},
                     {"weak_duality", wd.holds ? "1" : "0"}});
    } else {
      emit_json(g, {{"scenario_hash", scenario_hash(s)},
                    {"dual", eval.total},
                    {"opt_fixed_final", opt},
                    {"scale", cert.scale().str()},
                    {"feasible", feas.clean},
                    {"scaled_feasible", feas.scaled_feasible},
                    {"feasibility_violation", feas.first_violation},
                    {"guarantees", guar.clean},
                    {"guarantee_violation", guar.first_violation},
                    {"weak_duality", wd.holds}});
    }
    if (!ok) throw Error("certificate audit failed");
  });

  // lowerbound
  auto* lb = app.add_subcommand("lowerbound", "emit a lower-bound scenario and its predictions");
  std::string lb_family = "tree", lb_sidecar;
  int lb_k = 2, lb_d = 2;
  std::int64_t lb_alpha = 2;
  lb->add_option("--family", lb_family, "tree or hst")->check(CLI::IsMember({"tree", "hst"}));
  lb->add_option("--k", lb_k, "servers")->required();
  lb->add_option("--d", lb_d, "depth")->required();
  lb->add_option("--alpha", lb_alpha, "HST level ratio");
  lb->add_option("--sidecar", lb_sidecar, "write predictions to this file instead of embedding them");
  lb->callback([&] {
    LowerBoundInstance inst = lb_family == "tree" ? gen_tree_lowerbound(lb_k, lb_d) : gen_hst_lowerbound(lb_k, lb_d, lb_alpha);
    Scenario s{inst.tree, inst.init_online, inst.seq};
    Json pred{{"format", "prediction/v1"}, {"scenario_hash", scenario_hash(s)}, {"predicted_opt", inst.predicted_opt}};
    pred[lb_family == "tree" ? "predicted_dc_cost" : "predicted_dc_up_lb"] = inst.predicted_dc;
    pred["offline_schedule"] = schedule_to_json(inst.offline_schedule);
    Json doc = scenario_to_json(s);
    if (!lb_sidecar.empty()) write_text_file(lb_sidecar, pred.dump(2) + "\n");
    else doc["prediction"] = pred;
    emit_json(g, doc);
  });

  // tables
  auto* tb = app.add_subcommand("tables", "c_kd values and slope bands");
  int tb_k = 3, tb_d = 2;
  tb->add_option("--k", tb_k, "servers");
  tb->add_option("--d", tb_d, "depth");
  tb->callback([&] {
    BandTable bt = bands(tb_k, tb_d);
    if (g.format == "csv") {
      std::ostringstream s;
      s << "i,m_i,M_i\n";
      for (int i = 1; i <= tb_d; ++i) s << i << ',' << bt.lower(i) << ',' << bt.upper(i) << '\n';
      s << "c_kd," << c_kd(tb_k, tb_d) << ",\n";
      emit(g, s.str());
    } else {
      Json m = Json::array(), M = Json::array();
      for (int i = 1; i <= tb_d; ++i) {
        m.push_back(bt.lower(i).str());
        M.push_back(bt.upper(i).str());
      }
      emit_json(g, {{"k", tb_k}, {"d", tb_d}, {"c_kd", c_kd(tb_k, tb_d).str()}, {"m", m}, {"M", M},
                    {"weighted_ratio", bt.c.str()}});
    }
  });

  // embed
  auto* em = app.add_subcommand("embed", "random HST embedding of a metric/v1 file");
  std::string em_metric;
  int em_depth = 2, em_trials = 1;
  em->add_option("--metric", em_metric, "metric/v1 file")->required();
  em->add_option("--depth", em_depth, "HST depth");
  em->add_option("--trials", em_trials, "embeddings for distortion statistics");
  em->callback([&] {
    MetricSpace m = metric_from_json(read_json_file(em_metric));
    HstEmbedding e = frt_embed(m, em_depth, g.seed);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < em_trials; ++i) seeds.push_back(g.seed + i);
    DistortionStats st = distortion_stats(m, em_depth, seeds);
    if (g.format == "csv") {
      emit_table(g, {{"alpha", std::to_string(e.alpha)}, {"mean_stretch", std::to_string(st.mean)},
                     {"max_stretch", std::to_string(st.max)}, {"distortion", std::to_string(st.distortion)},
                     {"calibrated_bound", std::to_string(stretch_bound(m, em_depth))}});
    } else {
      emit_json(g, {{"tree", tree_to_json(e.hst)}, {"leaf_of", e.leaf_of}, {"alpha", e.alpha}, {"depth", e.depth},
                    {"seed", e.seed}, {"mean_stretch", st.mean}, {"max_stretch", st.max},
                    {"distortion", st.distortion}, {"calibrated_bound", stretch_bound(m, em_depth)}});
    }
  });

  // run-metric
  auto* rm = app.add_subcommand("run-metric", "Double Coverage on a metric through a random HST");
  std::string rm_metric, rm_requests;
  std::vector<int> rm_init;
  int rm_depth = 2, rm_trials = 1;
  rm->add_option("--metric", rm_metric, "metric/v1 file")->required();
  rm->add_option("--requests", rm_requests, "JSON list of requests over point indices")->required();
  rm->add_option("--init", rm_init, "initial point of each server")->required();
  rm->add_option("--depth", rm_depth, "HST depth");
  rm->add_option("--trials", rm_trials, "independent embeddings");
  rm->callback([&] {
    MetricSpace m = metric_from_json(read_json_file(rm_metric));
    RequestSequence seq = requests_from_json(read_json_file(rm_requests));
    DistanceFn dist = [&](Vertex a, Vertex b) { return m(a, b); };
    const std::int64_t opt = optimal_cost_flow(dist, rm_init, seq).cost;
    std::ostringstream csv;
    csv << "trial,seed,metric_cost,hst_cost,opt\n";
    Json rows = Json::array();
    for (int t = 0; t < rm_trials; ++t) {
      MetricRun r = run_on_metric(m, rm_init, seq, rm_depth, g.seed + t);
      csv << t << ',' << g.seed + t << ',' << r.metric_cost << ',' << r.hst_cost << ',' << opt << '\n';
      rows.push_back({{"seed", g.seed + t}, {"metric_cost", r.metric_cost}, {"hst_cost", r.hst_cost}});
    }
    if (g.format == "csv") emit(g, csv.str());
    else emit_json(g, {{"opt", opt}, {"runs", rows}});
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "run an audit sweep; exit code 1 if any trial fails");
  std::string ex_kind = "upper-hst", ex_grid = "2:2";
  ExperimentSpec spec;
  ex->add_option("--kind", ex_kind,
                 "upper-hst | upper-weighted | kserver | oracles | lowerbound-tree | lowerbound-hst | duality | "
                 "embedding | forward");
  ex->add_option("--grid", ex_grid, "comma separated k:d[:alpha] points");
  ex->add_option("--trials", spec.trials, "trials per grid point");
  ex->add_option("--length", spec.length, "requests per random scenario");
  ex->add_option("--rounds", spec.rounds, "gadget rounds for the forward adversary");
  ex->add_option("--threads", spec.threads, "worker threads (0: all cores)");
  bool ex_failed = false;
  ex->callback([&] {
    spec.kind = parse_experiment_kind(ex_kind);
    spec.grid = parse_grid(ex_grid);
    spec.seed = g.seed;
    spec.budget = g.budget;
    Report r = run_experiment(spec);
    if (g.format == "csv") emit(g, r.to_csv());
    else emit_json(g, r.to_json());
    std::cerr << r.rows.size() - r.failures() << "/" << r.rows.size() << " trials passed\n";
    ex_failed = r.failures() > 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return ex_failed ? 1 : 0;
}
