#include "ktaxi/double_coverage.hpp"

#include <algorithm>

namespace ktaxi {
namespace {

int lowest_server_at(const Configuration& c, Vertex v) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == v) return static_cast<int>(i);
  }
  return -1;
}

void check_original(const SubdividedTree& t, Vertex v) {
  if (!t.is_original(v)) {
    throw Error("request at vertex " + std::to_string(v) + " which is not an original vertex");
  }
}

}  // namespace

std::optional<std::size_t> first_invalid_relocation(const RequestSequence& seq) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].is_simple()) continue;
    if (i == 0) return i;
    const Request& prev = seq[i - 1];
    bool ok = prev.is_simple() ? prev.s == seq[i].s : prev.d == seq[i].s;
    if (!ok) return i;
  }
  return std::nullopt;
}

void validate_sequence(const WeightedTree& t, const RequestSequence& seq, bool leaves_only) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (Vertex v : {seq[i].s, seq[i].d}) {
      if (v < 0 || v >= t.size()) {
        throw Error("request " + std::to_string(i) + " names unknown vertex " + std::to_string(v));
      }
      if (leaves_only && !t.is_leaf(v)) {
        throw Error("request " + std::to_string(i) + " is not at a leaf");
      }
    }
    if (seq[i].is_simple() && seq[i].s != seq[i].d) {
      throw Error("simple request " + std::to_string(i) + " has distinct source and destination");
    }
  }
  if (auto bad = first_invalid_relocation(seq)) {
    throw Error("relocation " + std::to_string(*bad) +
                " does not follow an event leaving a server at its source");
  }
}

std::size_t Trace::step_count() const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.steps.size();
  return n;
}

DoubleCoverage::DoubleCoverage(std::shared_ptr<const SubdividedTree> tree, Configuration initial)
    : tree_(std::move(tree)), config_(std::move(initial)) {
  if (!tree_) throw Error("null tree");
  for (Vertex v : config_) {
    if (v < 0 || v >= tree_->size()) throw Error("initial position " + std::to_string(v) + " invalid");
  }
  step_cap_ = 2 * tree_->unit().diameter() + 2;
  trace_.tree = tree_;
  trace_.initial = config_;
  trace_.final_config = config_;
}

SmallStep DoubleCoverage::step_towards(Vertex target) const {
  const WeightedTree& u = tree_->unit();
  std::vector<int> occupant(u.size(), -1);
  for (std::size_t i = 0; i < config_.size(); ++i) {
    if (occupant[config_[i]] < 0) occupant[config_[i]] = static_cast<int>(i);
  }
  SmallStep step;
  for (std::size_t i = 0; i < config_.size(); ++i) {
    Vertex v = config_[i];
    if (occupant[v] != static_cast<int>(i)) continue;
    // Walk the v -> target path, excluding v itself.
    Vertex top = u.lca(v, target);
    bool blocked = false;
    for (Vertex w = v; w != top && !blocked;) {
      w = u.parent(w);
      if (occupant[w] >= 0) blocked = true;
    }
    for (Vertex w = target; w != top && !blocked; w = u.parent(w)) {
      if (w != v && occupant[w] >= 0) blocked = true;
    }
    if (blocked) continue;
    Move m{static_cast<int>(i), v, kNoVertex};
    if (top == v) {
      // Target below v: step to the child on the path.
      Vertex w = target;
      while (u.parent(w) != v) w = u.parent(w);
      m.to = w;
      step.down = m.server;
    } else {
      m.to = u.parent(v);
      step.up.push_back(m.server);
    }
    step.moves.push_back(m);
  }
  return step;
}

const RequestEvent& DoubleCoverage::serve(const Request& r) {
  check_original(*tree_, r.s);
  check_original(*tree_, r.d);
  RequestEvent ev;
  ev.request = r;
  if (r.is_simple()) {
    std::int64_t guard = 0;
    while (lowest_server_at(config_, r.s) < 0) {
      if (config_.empty()) throw Error("simple request with no servers");
      if (++guard > step_cap_) throw Error("double coverage failed to converge");
      SmallStep step = step_towards(r.s);
      for (const Move& m : step.moves) config_[m.server] = m.to;
      ev.cost_up += static_cast<std::int64_t>(step.up.size());
      ev.cost_down += step.down ? 1 : 0;
      ev.steps.push_back(std::move(step));
    }
  } else {
    int i = lowest_server_at(config_, r.s);
    if (i < 0) throw Error("relocation from unoccupied vertex " + std::to_string(r.s));
    ev.relocation = Move{i, r.s, r.d};
    config_[i] = r.d;
  }
  trace_.cost_up += ev.cost_up;
  trace_.cost_down += ev.cost_down;
  trace_.final_config = config_;
  trace_.events.push_back(std::move(ev));
  return trace_.events.back();
}

Trace DoubleCoverage::take_trace() && { return std::move(trace_); }

Trace run_double_coverage(std::shared_ptr<const SubdividedTree> tree, const Configuration& init,
                          const RequestSequence& seq) {
  validate_sequence(tree->unit(), seq);
  DoubleCoverage dc(std::move(tree), init);
  for (const Request& r : seq) dc.serve(r);
  return std::move(dc).take_trace();
}

std::vector<int> unobstructed_servers(const SubdividedTree& t, const Configuration& config,
                                      Vertex target) {
  std::vector<int> out;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const Vertex v = config[i];
    const std::int64_t dv = t.distance(v, target);
    bool blocked = false;
    for (std::size_t j = 0; j < config.size() && !blocked; ++j) {
      if (j == i) continue;
      const Vertex w = config[j];
      if (w == v) {
        blocked = j < i;
      } else {
        blocked = t.distance(v, w) + t.distance(w, target) == dv;
      }
    }
    if (!blocked) out.push_back(static_cast<int>(i));
  }
  return out;
}

TraceReport verify_trace(const Trace& trace) {
  TraceReport rep;
  auto fail = [&](std::size_t e, std::size_t s, std::string msg) {
    if (rep.clean) {
      rep.clean = false;
      rep.first_violation = std::move(msg);
      rep.event_index = e;
      rep.step_index = s;
    }
  };
  if (!trace.tree) {
    fail(0, 0, "trace has no tree");
    return rep;
  }
  const SubdividedTree& t = *trace.tree;
  Configuration c = trace.initial;
  std::int64_t up_total = 0, down_total = 0;
  for (std::size_t e = 0; e < trace.events.size() && rep.clean; ++e) {
    const RequestEvent& ev = trace.events[e];
    const Vertex s = ev.request.s;
    std::int64_t ev_up = 0, ev_down = 0;
    if (ev.request.is_simple()) {
      for (std::size_t k = 0; k < ev.steps.size() && rep.clean; ++k) {
        const SmallStep& st = ev.steps[k];
        if (std::find(c.begin(), c.end(), s) != c.end()) {
          fail(e, k, "step taken although the request is already served");
          break;
        }
        std::vector<int> up, down;
        for (const Move& m : st.moves) {
          if (m.server < 0 || m.server >= static_cast<int>(c.size()) || c[m.server] != m.from) {
            fail(e, k, "move does not start at the server position");
            break;
          }
          if (t.distance(m.from, m.to) != 1 || t.distance(m.to, s) + 1 != t.distance(m.from, s)) {
            fail(e, k, "move is not one short edge towards the request");
            break;
          }
          (t.parent(m.from) == m.to ? up : down).push_back(m.server);
        }
        if (down.size() > 1) fail(e, k, "B not singleton");
        std::vector<int> expected = unobstructed_servers(t, c, s);
        std::vector<int> moved;
        for (const Move& m : st.moves) moved.push_back(m.server);
        std::sort(moved.begin(), moved.end());
        if (moved != expected) fail(e, k, "moving servers differ from the unobstructed set");
        std::vector<int> rec_up = st.up;
        std::sort(rec_up.begin(), rec_up.end());
        std::sort(up.begin(), up.end());
        if (rec_up != up) fail(e, k, "recorded U does not match the moves");
        std::optional<int> rec_down = st.down;
        if ((down.empty() && rec_down) || (!down.empty() && rec_down != down.front())) {
          fail(e, k, "recorded B does not match the moves");
        }
        // Subtrees of U-servers are disjoint, exclude s, and lie under B's target.
        for (int i : up) {
          if (t.is_ancestor(c[i], s)) fail(e, k, "subtree of a U-server contains the request");
          for (int j : up) {
            if (i != j && t.is_ancestor(c[i], c[j])) fail(e, k, "U-server subtrees overlap");
          }
          if (!down.empty()) {
            if (!t.is_ancestor(c[down.front()], c[i])) fail(e, k, "U-server outside the subtree of B");
          }
        }
        for (const Move& m : st.moves) c[m.server] = m.to;
        ev_up += static_cast<std::int64_t>(up.size());
        ev_down += static_cast<std::int64_t>(down.size());
      }
      if (rep.clean && std::find(c.begin(), c.end(), s) == c.end()) {
        fail(e, ev.steps.size(), "simple request left unserved");
      }
      if (rep.clean && ev.relocation) fail(e, 0, "simple request carries a relocation");
    } else {
      if (!ev.steps.empty()) fail(e, 0, "relocation with small steps");
      if (!ev.relocation) {
        fail(e, 0, "relocation event without a move");
      } else {
        const Move& m = *ev.relocation;
        int first = -1;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (c[i] == s) {
            first = static_cast<int>(i);
            break;
          }
        }
        if (first < 0) fail(e, 0, "relocation from an unoccupied vertex");
        else if (m.server != first || m.from != s || m.to != ev.request.d)
          fail(e, 0, "relocation does not move the lowest-index server at s to d");
        else c[first] = ev.request.d;
      }
    }
    if (rep.clean && (ev.cost_up != ev_up || ev.cost_down != ev_down)) {
      fail(e, 0, "per-request cost tally mismatch");
    }
    up_total += ev_up;
    down_total += ev_down;
  }
  if (rep.clean && (up_total != trace.cost_up || down_total != trace.cost_down)) {
    fail(trace.events.size(), 0, "cost tally mismatch: cost_up/cost_down disagree with moves");
  }
  if (rep.clean && c != trace.final_config) {
    fail(trace.events.size(), 0, "replayed configuration differs from the final configuration");
  }
  return rep;
}

CostSummary cost_summary(const Trace& trace) {
  CostSummary s;
  for (const auto& ev : trace.events) {
    s.up += ev.cost_up;
    s.down += ev.cost_down;
    s.per_request.push_back(ev.cost_up + ev.cost_down);
  }
  s.total = s.up + s.down;
  return s;
}

Configuration replay(const Trace& trace) {
  Configuration c = trace.initial;
  for (const auto& ev : trace.events) {
    for (const auto& st : ev.steps) {
      for (const Move& m : st.moves) c[m.server] = m.to;
    }
    if (ev.relocation) c[ev.relocation->server] = ev.relocation->to;
  }
  return c;
}

}  // namespace ktaxi
