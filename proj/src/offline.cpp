#include "ktaxi/offline.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ktaxi/assignment.hpp"

namespace ktaxi {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

void check_final(const Configuration& init, const std::optional<Configuration>& fixed_final) {
  if (fixed_final && fixed_final->size() != init.size()) {
    throw Error("fixed final configuration has " + std::to_string(fixed_final->size()) +
                " servers, expected " + std::to_string(init.size()));
  }
}

int lowest_at(const Configuration& c, Vertex v) {
  auto it = std::find(c.begin(), c.end(), v);
  return it == c.end() ? -1 : static_cast<int>(it - c.begin());
}

Assignment match_to_final(const DistanceFn& dist, const Configuration& from, const Configuration& to) {
  CostMatrix m(from.size(), std::vector<std::int64_t>(to.size()));
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = 0; j < to.size(); ++j) m[i][j] = dist(from[i], to[j]);
  return min_cost_assignment(m);
}

// Appends the tail moves that carry `config` onto `fixed_final`.
void finish_schedule(const DistanceFn& dist, std::size_t n, const std::optional<Configuration>& fixed_final,
                     OfflineSchedule& s, Configuration& config) {
  if (fixed_final) {
    Assignment a = match_to_final(dist, config, *fixed_final);
    for (std::size_t i = 0; i < config.size(); ++i) {
      Vertex to = (*fixed_final)[a.row_to_col[i]];
      if (to == config[i]) continue;
      std::int64_t c = dist(config[i], to);
      s.moves.push_back({n, static_cast<int>(i), config[i], to, c});
      s.total_cost += c;
      config[i] = to;
    }
  }
  s.final_config = config;
}

}  // namespace

DistanceFn tree_distance(const WeightedTree& t, CostModel model) {
  if (model == CostModel::Upward) {
    return [&t](Vertex a, Vertex b) { return t.upward_distance(a, b); };
  }
  return [&t](Vertex a, Vertex b) { return t.distance(a, b); };
}

OfflineResult optimal_cost_dp(const DistanceFn& dist, const Configuration& init,
                              const RequestSequence& seq,
                              const std::optional<Configuration>& fixed_final,
                              std::int64_t budget) {
  check_final(init, fixed_final);
  if (auto bad = first_invalid_relocation(seq)) {
    throw Error("relocation " + std::to_string(*bad) + " has no server at its source");
  }
  struct Node {
    std::int64_t cost;
    int parent;
    Vertex moved;  // position of the server that served the request
  };
  std::vector<std::vector<Configuration>> states(1);
  std::vector<std::vector<Node>> nodes(1);
  Configuration start = init;
  std::sort(start.begin(), start.end());
  states[0].push_back(start);
  nodes[0].push_back({0, -1, kNoVertex});
  std::int64_t total_states = 1;

  for (std::size_t t = 0; t < seq.size(); ++t) {
    const Request& r = seq[t];
    std::map<Configuration, int> index;
    std::vector<Configuration> next;
    std::vector<Node> next_nodes;
    auto relax = [&](Configuration c, std::int64_t cost, int parent, Vertex moved) {
      std::sort(c.begin(), c.end());
      auto [it, fresh] = index.try_emplace(c, static_cast<int>(next.size()));
      if (fresh) {
        next.push_back(std::move(c));
        next_nodes.push_back({cost, parent, moved});
        if (++total_states > budget) throw Error("offline DP state budget exceeded");
      } else if (cost < next_nodes[it->second].cost) {
        next_nodes[it->second] = {cost, parent, moved};
      }
    };
    for (int si = 0; si < static_cast<int>(states[t].size()); ++si) {
      const Configuration& c = states[t][si];
      const std::int64_t base = nodes[t][si].cost;
      if (r.is_simple()) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i > 0 && c[i] == c[i - 1]) continue;
          Configuration n2 = c;
          n2[i] = r.s;
          relax(std::move(n2), base + dist(c[i], r.s), si, c[i]);
        }
      } else {
        int i = lowest_at(c, r.s);
        if (i < 0) continue;
        Configuration n2 = c;
        n2[i] = r.d;
        relax(std::move(n2), base, si, r.s);
      }
    }
    if (next.empty()) throw Error("no feasible offline schedule for request " + std::to_string(t));
    states.push_back(std::move(next));
    nodes.push_back(std::move(next_nodes));
  }

  const std::size_t n = seq.size();
  int best = -1;
  std::int64_t best_cost = kInf;
  for (int si = 0; si < static_cast<int>(states[n].size()); ++si) {
    std::int64_t c = nodes[n][si].cost;
    if (fixed_final) c += match_to_final(dist, states[n][si], *fixed_final).cost;
    if (c < best_cost) {
      best_cost = c;
      best = si;
    }
  }

  std::vector<Vertex> moved(n);
  for (std::size_t t = n, si = best; t > 0; --t) {
    moved[t - 1] = nodes[t][si].moved;
    si = nodes[t][si].parent;
  }
  OfflineResult res;
  OfflineSchedule& s = res.schedule;
  s.initial = init;
  s.server_of.assign(n, -1);
  Configuration config = init;
  for (std::size_t t = 0; t < n; ++t) {
    const Request& r = seq[t];
    int i = lowest_at(config, moved[t]);
    if (r.is_simple() && moved[t] != r.s) {
      std::int64_t c = dist(moved[t], r.s);
      s.moves.push_back({t, i, moved[t], r.s, c});
      s.total_cost += c;
    }
    config[i] = r.d;
    s.server_of[t] = i;
  }
  finish_schedule(dist, n, fixed_final, s, config);
  res.cost = best_cost;
  if (s.total_cost != res.cost) throw Error("offline DP reconstruction disagrees with its optimum");
  return res;
}

OfflineResult optimal_cost_dp(const WeightedTree& t, const Configuration& init,
                              const RequestSequence& seq,
                              const std::optional<Configuration>& fixed_final, CostModel model,
                              std::int64_t budget) {
  return optimal_cost_dp(tree_distance(t, model), init, seq, fixed_final, budget);
}

OfflineResult optimal_cost_flow(const DistanceFn& dist, const Configuration& init,
                                const RequestSequence& seq,
                                const std::optional<Configuration>& fixed_final) {
  check_final(init, fixed_final);
  struct Job {
    std::size_t first;
    std::size_t last;
    Vertex arrive;
    Vertex depart;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const Request& r = seq[t];
    if (r.is_simple()) {
      jobs.push_back({t, t, r.s, r.s});
    } else {
      if (jobs.empty() || jobs.back().depart != r.s || jobs.back().last + 1 != t) {
        throw Error("relocation " + std::to_string(t) + " has no server at its source");
      }
      jobs.back().last = t;
      jobs.back().depart = r.d;
    }
  }

  const int k = static_cast<int>(init.size());
  const int J = static_cast<int>(jobs.size());
  FlowNetwork net(k + 2 * J);
  auto arr = [&](int j) { return k + 2 * j; };
  auto dep = [&](int j) { return k + 2 * j + 1; };
  for (int i = 0; i < k; ++i) net.supply[i] = 1;
  std::vector<int> tail_nodes;
  if (fixed_final) {
    for (int m = 0; m < k; ++m) {
      tail_nodes.push_back(net.add_node());
      net.supply.back() = -1;
    }
  } else {
    tail_nodes.push_back(net.add_node());
    net.supply.back() = -k;
  }
  auto add_tail = [&](int from, Vertex pos) {
    if (fixed_final) {
      for (int m = 0; m < k; ++m) net.add_arc(from, tail_nodes[m], 1, dist(pos, (*fixed_final)[m]));
    } else {
      net.add_arc(from, tail_nodes[0], 1, 0);
    }
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < J; ++j) net.add_arc(i, arr(j), 1, dist(init[i], jobs[j].arrive));
    add_tail(i, init[i]);
  }
  for (int j = 0; j < J; ++j) {
    net.add_arc(arr(j), dep(j), 1, 0, 1);
    for (int j2 = j + 1; j2 < J; ++j2) net.add_arc(dep(j), arr(j2), 1, dist(jobs[j].depart, jobs[j2].arrive));
    add_tail(dep(j), jobs[j].depart);
  }
  if (J > 0 && k == 0) throw Error("requests but no servers");

  FlowResult fr;
  try {
    fr = min_cost_flow(net);
  } catch (const Error& e) {
    throw Error(std::string("internal error in offline flow: ") + e.what());
  }

  std::vector<std::vector<int>> out(net.nodes);
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    if (fr.flow[a] > 0) out[net.arcs[a].from].push_back(static_cast<int>(a));
  }
  OfflineResult res;
  OfflineSchedule& s = res.schedule;
  s.initial = init;
  s.server_of.assign(seq.size(), -1);
  Configuration config = init;
  for (int i = 0; i < k; ++i) {
    int node = i;
    while (true) {
      if (out[node].empty()) throw Error("internal error: broken flow path");
      const FlowArc& a = net.arcs[out[node].front()];
      if (a.to >= k + 2 * J) {
        if (fixed_final) {
          Vertex to = (*fixed_final)[a.to - (k + 2 * J)];
          if (to != config[i]) s.moves.push_back({seq.size(), i, config[i], to, a.cost});
          config[i] = to;
        }
        break;
      }
      const int j = (a.to - k) / 2;
      const Job& job = jobs[j];
      if (job.arrive != config[i]) s.moves.push_back({job.first, i, config[i], job.arrive, a.cost});
      for (std::size_t t = job.first; t <= job.last; ++t) s.server_of[t] = i;
      config[i] = job.depart;
      node = dep(j);
    }
  }
  std::stable_sort(s.moves.begin(), s.moves.end(),
                   [](const ScheduledMove& a, const ScheduledMove& b) { return a.before < b.before; });
  for (const auto& m : s.moves) s.total_cost += m.cost;
  s.final_config = config;
  res.cost = fr.cost;
  if (s.total_cost != res.cost) throw Error("internal error: flow decomposition cost mismatch");
  return res;
}

OfflineResult optimal_cost_flow(const WeightedTree& t, const Configuration& init,
                                const RequestSequence& seq,
                                const std::optional<Configuration>& fixed_final, CostModel model) {
  return optimal_cost_flow(tree_distance(t, model), init, seq, fixed_final);
}

std::int64_t replay_schedule(const DistanceFn& dist, const RequestSequence& seq,
                             const OfflineSchedule& schedule) {
  if (schedule.server_of.size() != seq.size()) throw Error("schedule does not cover the sequence");
  Configuration config = schedule.initial;
  std::int64_t total = 0;
  std::size_t mi = 0;
  for (std::size_t t = 0; t <= seq.size(); ++t) {
    for (; mi < schedule.moves.size() && schedule.moves[mi].before == t; ++mi) {
      const ScheduledMove& m = schedule.moves[mi];
      if (m.server < 0 || m.server >= static_cast<int>(config.size()) || config[m.server] != m.from) {
        throw Error("scheduled move " + std::to_string(mi) + " does not start at the server position");
      }
      total += dist(m.from, m.to);
      config[m.server] = m.to;
    }
    if (mi < schedule.moves.size() && schedule.moves[mi].before < t) {
      throw Error("scheduled moves are not ordered by request");
    }
    if (t == seq.size()) break;
    const int i = schedule.server_of[t];
    if (i < 0 || i >= static_cast<int>(config.size()) || config[i] != seq[t].s) {
      throw Error("request " + std::to_string(t) + " is not served by the schedule");
    }
    config[i] = seq[t].d;
  }
  if (mi != schedule.moves.size()) throw Error("scheduled moves after the last request");
  if (config != schedule.final_config) throw Error("schedule ends in a different configuration");
  return total;
}

}  // namespace ktaxi
