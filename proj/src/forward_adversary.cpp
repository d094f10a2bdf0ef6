#include "ktaxi/forward_adversary.hpp"

#include <random>

namespace ktaxi {
namespace {

constexpr Vertex kRoot = 0;

class StaticStrategy : public DualStrategy {
 public:
  std::string name() const override { return "static"; }
  std::vector<std::int64_t> respond(const Request&, const std::vector<std::int64_t>& prev) override {
    return prev;
  }
};

class RaiseRequestedStrategy : public DualStrategy {
 public:
  std::string name() const override { return "raise-requested"; }
  std::vector<std::int64_t> respond(const Request& r, const std::vector<std::int64_t>& prev) override {
    auto a = prev;
    if (r.is_simple()) ++a[r.s];
    repair_slopes(a);
    return a;
  }
};

class RandomStrategy : public DualStrategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : rng_(seed), seed_(seed) {}
  std::string name() const override { return "random-" + std::to_string(seed_); }
  std::vector<std::int64_t> initial() override {
    std::vector<std::int64_t> a{0, static_cast<std::int64_t>(rng_() % 2), static_cast<std::int64_t>(rng_() % 2)};
    repair_slopes(a);
    return a;
  }
  std::vector<std::int64_t> respond(const Request&, const std::vector<std::int64_t>& prev) override {
    auto a = prev;
    for (auto& x : a) x += static_cast<std::int64_t>(rng_() % 3);
    repair_slopes(a);
    return a;
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

std::string check_step(const std::vector<std::int64_t>& prev, const std::vector<std::int64_t>& next) {
  if (next.size() != 3) return "strategy returned " + std::to_string(next.size()) + " altitudes";
  for (int u = 0; u < 3; ++u) {
    if (next[u] < prev[u]) return "altitude of vertex " + std::to_string(u) + " decreased";
  }
  return {};
}

std::string check_slopes(const std::vector<std::int64_t>& a) {
  for (Vertex leaf : {1, 2}) {
    const std::int64_t s = a[leaf] - a[kRoot];
    if (s < -1 || s > 1) return "slope " + std::to_string(s) + " at leaf " + std::to_string(leaf);
  }
  return {};
}

}  // namespace

std::unique_ptr<DualStrategy> make_static_strategy() { return std::make_unique<StaticStrategy>(); }
std::unique_ptr<DualStrategy> make_raise_requested_strategy() { return std::make_unique<RaiseRequestedStrategy>(); }
std::unique_ptr<DualStrategy> make_random_strategy(std::uint64_t seed) {
  return std::make_unique<RandomStrategy>(seed);
}

void repair_slopes(std::vector<std::int64_t>& a) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex leaf : {1, 2}) {
      if (a[leaf] - a[kRoot] > 1) {
        a[kRoot] = a[leaf] - 1;
        changed = true;
      }
      if (a[kRoot] - a[leaf] > 1) {
        a[leaf] = a[kRoot] - 1;
        changed = true;
      }
    }
  }
}

AdversaryTranscript forward_adversary(DualStrategy& strategy, int rounds) {
  AdversaryTranscript out;
  out.strategy = strategy.name();
  Vertex server = 1;
  std::vector<std::int64_t> a = strategy.initial();
  out.altitudes.push_back(a);
  if (auto bad = check_step(a, a); !bad.empty()) {
    out.feasible = false;
    out.violation = bad;
    return out;
  }

  // Applies request r, lets the strategy answer and accounts D_t.
  auto issue = [&](const Request& r) -> bool {
    // The slope constraint binds the altitudes in force before a simple request.
    if (r.is_simple()) {
      if (auto bad = check_slopes(a); !bad.empty()) {
        out.feasible = false;
        out.violation = "before request " + std::to_string(out.requests.size()) + ": " + bad;
        return false;
      }
    }
    const Vertex before = server;
    if (r.is_simple()) {
      if (server != r.s) out.opt += 2;
      server = r.s;
    } else {
      server = r.d;
    }
    out.requests.push_back(r);
    std::vector<std::int64_t> next = strategy.respond(r, a);
    if (auto bad = check_step(a, next); !bad.empty()) {
      out.feasible = false;
      out.violation = "at request " + std::to_string(out.requests.size() - 1) + ": " + bad;
      return false;
    }
    std::int64_t d = 0;
    if (r.is_simple()) {
      d = (next[r.s] - a[r.s]) - (next[server] - a[before]);
    } else {
      d = -(next[server] - a[server]);
    }
    out.dual_per_request.push_back(d);
    out.total_dual += d;
    a = std::move(next);
    out.altitudes.push_back(a);
    return true;
  };

  if (!issue(Request::simple(server))) return out;
  for (int round = 0; round < rounds; ++round) {
    // u is the leaf of lower altitude, ties to the lower id.
    const Vertex u = a[1] <= a[2] ? 1 : 2;
    const Vertex w = 3 - u;
    GadgetRecord g;
    g.first_request = out.requests.size();
    const std::int64_t before = out.total_dual;
    if (server == w) {
      g.relocated = true;
      if (!issue(Request::relocate(w, u))) return out;
    }
    if (!issue(Request::simple(w))) return out;
    g.dual = out.total_dual - before;
    g.cumulative_dual = out.total_dual;
    g.cumulative_opt = out.opt;
    out.gadgets.push_back(g);
  }
  return out;
}

}  // namespace ktaxi
