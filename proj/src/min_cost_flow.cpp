#include "ktaxi/min_cost_flow.hpp"

#include <limits>
#include <numeric>
#include <queue>

namespace ktaxi {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Residual {
  struct Arc {
    int to;
    int rev;
    std::int64_t cap;
    std::int64_t cost;
  };
  std::vector<std::vector<Arc>> g;

  explicit Residual(int n) : g(n) {}
  std::pair<int, int> add(int u, int v, std::int64_t cap, std::int64_t cost) {
    g[u].push_back({v, static_cast<int>(g[v].size()), cap, cost});
    g[v].push_back({u, static_cast<int>(g[u].size()) - 1, 0, -cost});
    return {u, static_cast<int>(g[u].size()) - 1};
  }
};

}  // namespace

FlowResult min_cost_flow(const FlowNetwork& net) {
  if (static_cast<int>(net.supply.size()) != net.nodes) throw Error("supply vector size mismatch");
  std::vector<std::int64_t> balance = net.supply;
  if (std::accumulate(balance.begin(), balance.end(), std::int64_t{0}) != 0) {
    throw Error("flow network supplies do not sum to zero");
  }
  FlowResult res;
  res.flow.assign(net.arcs.size(), 0);
  const int n = net.nodes;
  const int ss = n, tt = n + 1;
  Residual r(n + 2);
  std::vector<std::pair<int, int>> handle(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const FlowArc& a = net.arcs[i];
    if (a.lower < 0 || a.capacity < a.lower) throw Error("arc bounds inconsistent");
    if (a.from < 0 || a.from >= n || a.to < 0 || a.to >= n) throw Error("arc endpoint out of range");
    balance[a.from] -= a.lower;
    balance[a.to] += a.lower;
    res.cost += a.lower * a.cost;
    handle[i] = r.add(a.from, a.to, a.capacity - a.lower, a.cost);
  }
  std::int64_t need = 0;
  for (int v = 0; v < n; ++v) {
    if (balance[v] > 0) {
      r.add(ss, v, balance[v], 0);
      need += balance[v];
    } else if (balance[v] < 0) {
      r.add(v, tt, -balance[v], 0);
    }
  }

  const int total = n + 2;
  // Bellman-Ford for initial potentials (costs may be negative).
  std::vector<std::int64_t> pot(total, 0);
  for (int it = 0; it < total; ++it) {
    bool changed = false;
    for (int u = 0; u < total; ++u) {
      for (const auto& a : r.g[u]) {
        if (a.cap > 0 && pot[u] + a.cost < pot[a.to]) {
          pot[a.to] = pot[u] + a.cost;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (it == total - 1) throw Error("negative cycle in flow network");
  }

  std::int64_t sent = 0;
  std::vector<std::int64_t> dist(total);
  std::vector<std::pair<int, int>> prev(total);
  while (sent < need) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[ss] = 0;
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, ss});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      for (int k = 0; k < static_cast<int>(r.g[u].size()); ++k) {
        const auto& a = r.g[u][k];
        if (a.cap <= 0) continue;
        std::int64_t nd = du + a.cost + pot[u] - pot[a.to];
        if (nd < dist[a.to]) {
          dist[a.to] = nd;
          prev[a.to] = {u, k};
          pq.push({nd, a.to});
        }
      }
    }
    if (dist[tt] >= kInf) throw Error("flow network is infeasible");
    for (int v = 0; v < total; ++v) {
      if (dist[v] < kInf) pot[v] += dist[v];
    }
    std::int64_t push = need - sent;
    for (int v = tt; v != ss; v = prev[v].first) {
      push = std::min(push, r.g[prev[v].first][prev[v].second].cap);
    }
    for (int v = tt; v != ss; v = prev[v].first) {
      auto& a = r.g[prev[v].first][prev[v].second];
      a.cap -= push;
      r.g[v][a.rev].cap += push;
      res.cost += push * a.cost;
    }
    sent += push;
  }

  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const auto& a = r.g[handle[i].first][handle[i].second];
    res.flow[i] = net.arcs[i].capacity - a.cap;
  }
  return res;
}

}  // namespace ktaxi
