#include "ktaxi/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ktaxi {
namespace {

void expect_format(const Json& j, const std::string& want) {
  if (!j.is_object() || !j.contains("format")) throw Error("document has no format field, expected " + want);
  const std::string got = j.at("format").get<std::string>();
  if (got != want) throw Error("expected format " + want + ", got " + got);
}

template <typename F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error("malformed " + what + ": " + e.what());
  }
}

}  // namespace

Json tree_to_json(const WeightedTree& t) {
  Json edges = Json::array();
  for (const Edge& e : t.edges()) edges.push_back({e.child, e.parent, e.weight});
  Json j{{"format", "tree/v1"}, {"root", t.root()}, {"edges", edges}};
  if (t.has_labels()) j["labels"] = t.labels();
  return j;
}

WeightedTree tree_from_json(const Json& j) {
  expect_format(j, "tree/v1");
  return guarded("tree", [&] {
    std::vector<Edge> edges;
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw Error("tree edge must be [child, parent, weight]");
      edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>(), e[2].get<std::int64_t>()});
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return WeightedTree::build(j.at("root").get<Vertex>(), edges, std::move(labels));
  });
}

Json requests_to_json(const RequestSequence& seq) {
  Json out = Json::array();
  for (const Request& r : seq) {
    if (r.is_simple()) out.push_back({{"type", "simple"}, {"s", r.s}});
    else out.push_back({{"type", "relocate"}, {"s", r.s}, {"d", r.d}});
  }
  return out;
}

RequestSequence requests_from_json(const Json& j) {
  return guarded("request list", [&] {
    RequestSequence seq;
    for (const Json& r : j) {
      const std::string type = r.at("type").get<std::string>();
      if (type == "simple") seq.push_back(Request::simple(r.at("s").get<Vertex>()));
      else if (type == "relocate") seq.push_back(Request::relocate(r.at("s").get<Vertex>(), r.at("d").get<Vertex>()));
      else throw Error("unknown request type " + type);
    }
    return seq;
  });
}

Json scenario_to_json(const Scenario& s) {
  return {{"format", "scenario/v1"},
          {"tree", tree_to_json(s.tree)},
          {"k", s.k()},
          {"initial_positions", s.initial},
          {"requests", requests_to_json(s.requests)}};
}

Scenario scenario_from_json(const Json& j) {
  expect_format(j, "scenario/v1");
  return guarded("scenario", [&] {
    Scenario s;
    s.tree = tree_from_json(j.at("tree"));
    s.initial = j.at("initial_positions").get<Configuration>();
    if (j.contains("k") && j.at("k").get<int>() != s.k()) {
      throw Error("scenario k disagrees with the number of initial positions");
    }
    for (Vertex v : s.initial) {
      if (v < 0 || v >= s.tree.size()) throw Error("initial position " + std::to_string(v) + " invalid");
    }
    s.requests = requests_from_json(j.at("requests"));
    validate_sequence(s.tree, s.requests);
    return s;
  });
}

Json trace_to_json(const Trace& t) {
  Json events = Json::array();
  for (const RequestEvent& ev : t.events) {
    Json e{{"request", requests_to_json({ev.request})[0]}, {"cost_up", ev.cost_up}, {"cost_down", ev.cost_down}};
    Json steps = Json::array();
    for (const SmallStep& st : ev.steps) {
      Json moves = Json::array();
      for (const Move& m : st.moves) moves.push_back({m.server, m.from, m.to});
      steps.push_back({{"U", st.up}, {"B", st.down ? Json(*st.down) : Json(nullptr)}, {"moves", moves}});
    }
    e["steps"] = steps;
    if (ev.relocation) e["relocation"] = {ev.relocation->server, ev.relocation->from, ev.relocation->to};
    events.push_back(std::move(e));
  }
  Json j{{"format", "trace/v1"},
         {"initial", t.initial},
         {"final", t.final_config},
         {"cost_up", t.cost_up},
         {"cost_down", t.cost_down},
         {"events", events}};
  if (t.tree) j["short_tree"] = tree_to_json(t.tree->unit());
  return j;
}

Json certificate_to_json(const AltitudeCertificate& c) {
  Json events = Json::array();
  for (const CertEvent& e : c.reverse_events) {
    events.push_back({{"event", e.step}, {"top", e.top}, {"frontier", e.frontier}, {"delta", e.delta}});
  }
  Json j{{"format", "dualcert/v1"},
         {"mode", c.mode == CertMode::Monotone ? "monotone" : "banded"},
         {"base", c.base},
         {"events", events}};
  if (c.bands) {
    j["k"] = c.bands->k;
    j["d"] = c.bands->d;
    j["scale"] = c.bands->c.str();
  }
  return j;
}

AltitudeCertificate certificate_from_json(const Json& j) {
  expect_format(j, "dualcert/v1");
  return guarded("certificate", [&] {
    AltitudeCertificate c;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "monotone") c.mode = CertMode::Monotone;
    else if (mode == "banded") c.mode = CertMode::Banded;
    else throw Error("unknown certificate mode " + mode);
    if (c.mode == CertMode::Banded) c.bands = bands(j.at("k").get<int>(), j.at("d").get<int>());
    c.base = j.at("base").get<std::int64_t>();
    for (const Json& e : j.at("events")) {
      c.reverse_events.push_back({e.at("event").get<std::size_t>(), e.at("top").get<Vertex>(),
                                  e.at("frontier").get<std::vector<Vertex>>(), e.at("delta").get<std::int64_t>()});
    }
    return c;
  });
}

Json metric_to_json(const MetricSpace& m) {
  return {{"format", "metric/v1"}, {"points", m.names()}, {"dist", m.matrix()}};
}

MetricSpace metric_from_json(const Json& j) {
  expect_format(j, "metric/v1");
  return guarded("metric", [&] {
    return MetricSpace(j.at("points").get<std::vector<std::string>>(),
                       j.at("dist").get<std::vector<std::int64_t>>());
  });
}

Json schedule_to_json(const OfflineSchedule& s) {
  Json moves = Json::array();
  for (const ScheduledMove& m : s.moves) {
    moves.push_back({{"before", m.before}, {"server", m.server}, {"from", m.from}, {"to", m.to}, {"cost", m.cost}});
  }
  return {{"initial", s.initial},
          {"moves", moves},
          {"server_of", s.server_of},
          {"final", s.final_config},
          {"total_cost", s.total_cost}};
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = scenario_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

}  // namespace ktaxi
