#include "ktaxi/lower_bounds.hpp"

#include <algorithm>
#include <map>

namespace ktaxi {
namespace {

using Multiset = std::map<Vertex, int>;

Multiset count(const Configuration& c) {
  Multiset m;
  for (Vertex v : c) ++m[v];
  return m;
}

// Elements of a not covered by b.
std::vector<Vertex> difference(const Configuration& a, const Configuration& b) {
  Multiset mb = count(b);
  std::vector<Vertex> out;
  for (Vertex v : a) {
    if (mb[v] > 0) --mb[v];
    else out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int height(const WeightedTree& t, Vertex v) {
  return t.combinatorial_height() - t.combinatorial_depth(v);
}

Vertex leftmost_leaf(const WeightedTree& t, Vertex v) {
  while (!t.is_leaf(v)) v = t.children(v).front();
  return v;
}

// Live Double Coverage run plus a labeled offline configuration that follows
// the same request sequence.
class Builder {
 public:
  Builder(std::shared_ptr<const SubdividedTree> t, Configuration online, Configuration offline)
      : tree_(t), dc_(t, online), initial_offline_(offline), offline_(std::move(offline)) {}

  const SubdividedTree& tree() const { return *tree_; }
  const WeightedTree& unit() const { return tree_->unit(); }
  const Configuration& online() const { return dc_.configuration(); }
  const Configuration& offline() const { return offline_; }
  std::int64_t dc_cost() const { return dc_.trace().total_cost(); }
  const RequestSequence& seq() const { return seq_; }

  void simple(Vertex v) {
    server_of_.push_back(offline_at(v));
    push(Request::simple(v));
  }

  // Moves a matched online/offline pair; the zero-cost simple request in front
  // keeps the relocation attached to an event that leaves a server at p.
  void relocate_pair(Vertex p, Vertex q) {
    if (p == q) return;
    simple(p);
    const int i = offline_at(p);
    server_of_.push_back(i);
    offline_[i] = q;
    push(Request::relocate(p, q));
  }

  void offline_move(int server, Vertex to, std::int64_t cost) {
    moves_.push_back({seq_.size(), server, offline_[server], to, cost});
    offline_[server] = to;
  }

  int offline_at(Vertex v) const {
    for (std::size_t i = 0; i < offline_.size(); ++i) {
      if (offline_[i] == v) return static_cast<int>(i);
    }
    throw Error("generator requested vertex " + std::to_string(v) + " without an offline server");
  }

  bool subtree_empty(Vertex v) const {
    auto inside = [&](Vertex p) { return unit().is_ancestor(v, p); };
    return std::none_of(online().begin(), online().end(), inside) &&
           std::none_of(offline_.begin(), offline_.end(), inside);
  }

  // Children of v whose subtrees hold no server, skipping `exclude`.
  std::vector<Vertex> free_children(Vertex v, int n, const std::vector<Vertex>& exclude) const {
    std::vector<Vertex> out;
    for (Vertex c : tree_->base().children(v)) {
      if (static_cast<int>(out.size()) == n) break;
      if (std::find(exclude.begin(), exclude.end(), c) != exclude.end()) continue;
      if (subtree_empty(c)) out.push_back(c);
    }
    if (static_cast<int>(out.size()) < n) {
      throw Error("vertex " + std::to_string(v) + " has too few free children");
    }
    return out;
  }

  OfflineSchedule schedule() const {
    OfflineSchedule s;
    s.initial = initial_offline_;
    s.moves = moves_;
    s.server_of = server_of_;
    s.final_config = offline_;
    for (const auto& m : moves_) s.total_cost += m.cost;
    return s;
  }

 private:
  void push(const Request& r) {
    seq_.push_back(r);
    dc_.serve(r);
  }

  std::shared_ptr<const SubdividedTree> tree_;
  DoubleCoverage dc_;
  Configuration initial_offline_;
  Configuration offline_;
  RequestSequence seq_;
  std::vector<int> server_of_;
  std::vector<ScheduledMove> moves_;
};

void jmatch(Builder& b, Vertex x, Vertex y, const std::vector<Vertex>& pairs, int h) {
  if (h == 0) {
    b.simple(y);
    return;
  }
  const int j = static_cast<int>(pairs.size());
  std::vector<Vertex> z = b.free_children(y, j, {});
  for (int i = 0; i < j; ++i) b.relocate_pair(pairs[i], z[i]);
  b.simple(y);
  for (int l = 1; l <= j; ++l) {
    std::vector<Vertex> sub{y};
    sub.insert(sub.end(), z.begin(), z.begin() + (l - 1));
    jmatch(b, y, z[l - 1], sub, h - 1);
  }
  for (int i = 0; i < j; ++i) b.relocate_pair(z[i], pairs[i]);
  (void)x;
}

// Shared tail of all three transformation cases: request y, then walk the
// l-matches around (y, c[l-1]) for l = 1..k-2.
void gather_and_unwind(Builder& b, Vertex y, const std::vector<Vertex>& c, int k, int h) {
  b.simple(y);
  for (int l = 1; l <= k - 2; ++l) {
    std::vector<Vertex> sub{y};
    sub.insert(sub.end(), c.begin(), c.begin() + (l - 1));
    jmatch(b, y, c[l - 1], sub, h);
  }
}

// Returns the new (x, y) of the resulting situation.
std::pair<Vertex, Vertex> transform(Builder& b, SituationKind kind, int h, Vertex x, Vertex y) {
  const WeightedTree& t = b.tree().base();
  const int k = static_cast<int>(b.online().size());
  const int d = t.combinatorial_height();
  std::vector<Vertex> pairs = matched_positions(b.online(), b.offline());
  if (static_cast<int>(pairs.size()) != k - 1) throw Error("situation needs k-1 matched pairs");
  if (kind == SituationKind::Up) {
    if (h < 0 || h > d - 1) throw Error("up-situation height out of range");
    Vertex z;
    std::vector<Vertex> sib;
    if (h <= d - 2) {
      z = t.parent(y);
      sib = b.free_children(y, k - 2, {x});
    } else {
      std::vector<Vertex> c = b.free_children(y, k - 1, {x});
      z = c.back();
      sib.assign(c.begin(), c.end() - 1);
    }
    b.relocate_pair(pairs[0], z);
    for (int i = 0; i < k - 2; ++i) b.relocate_pair(pairs[i + 1], sib[i]);
    gather_and_unwind(b, y, sib, k, h);
    return {y, z};
  }
  if (h < 2 || h > d) throw Error("down-situation height out of range");
  std::vector<Vertex> z = b.free_children(y, k - 1, {});
  for (int i = 0; i < k - 1; ++i) b.relocate_pair(pairs[i], z[i]);
  gather_and_unwind(b, y, z, k, h - 2);
  return {y, z.back()};
}

std::shared_ptr<const SubdividedTree> unit_tree_of(const WeightedTree& t) {
  for (Vertex v = 0; v < t.size(); ++v) {
    if (v != t.root() && t.weight(v) != 1) throw Error("lower-bound tree must have unit edges");
  }
  if (!t.uniform_combinatorial_leaf_depth()) throw Error("lower-bound tree must have uniform depth");
  return std::make_shared<const SubdividedTree>(t);
}

Fragment finish(const Builder& b, Situation next) {
  Fragment f;
  f.seq = b.seq();
  f.dc_cost = b.dc_cost();
  next.online = b.online();
  next.offline = b.offline();
  f.result = std::move(next);
  return f;
}

}  // namespace

std::vector<Vertex> matched_positions(const Configuration& online, const Configuration& offline) {
  Multiset mb = count(offline);
  std::vector<Vertex> out;
  for (Vertex v : online) {
    if (mb[v] > 0) {
      --mb[v];
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_situation(const WeightedTree& t, const Situation& s) {
  if (s.online.size() != s.offline.size()) throw Error("situation configurations differ in size");
  const std::vector<Vertex> extra_on = difference(s.online, s.offline);
  const std::vector<Vertex> extra_off = difference(s.offline, s.online);
  auto has = [](const std::vector<Vertex>& v, Vertex x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  if (s.kind == SituationKind::JMatch) {
    if (static_cast<int>(matched_positions(s.online, s.offline).size()) != s.j) {
      throw Error("j-match has the wrong number of matched pairs");
    }
    if (!has(extra_on, s.x)) throw Error("j-match lacks an unmatched online server at x");
    if (!has(extra_off, s.y) || t.parent(s.y) != s.x) {
      throw Error("j-match lacks an unmatched offline server at a child of x");
    }
    for (Vertex v : extra_on) {
      if (v != s.x && t.is_ancestor(s.x, v)) throw Error("j-match has an unmatched online server below x");
    }
    return;
  }
  if (extra_on.size() != 1 || extra_off.size() != 1 || extra_on[0] != s.x || extra_off[0] != s.y) {
    throw Error("situation must have exactly one unmatched server on each side");
  }
  if (height(t, s.x) != s.h) throw Error("unmatched online server is not at height h");
  const bool ok = s.kind == SituationKind::Up ? t.parent(s.x) == s.y : t.parent(s.y) == s.x;
  if (!ok) throw Error("unmatched offline server is not adjacent to x as required");
}

WeightedTree kary_unit_tree(int k, int d) { return build_hst(HstSpec::geometric(1, d, k + 1)); }

Fragment gen_jmatch(const WeightedTree& t, const Situation& s) {
  if (s.kind != SituationKind::JMatch) throw Error("gen_jmatch needs a j-match");
  check_situation(t, s);
  Builder b(unit_tree_of(t), s.online, s.offline);
  jmatch(b, s.x, s.y, matched_positions(s.online, s.offline), height(t, s.y));
  return finish(b, s);
}

Fragment gen_transform(const WeightedTree& t, const Situation& s) {
  if (s.kind == SituationKind::JMatch) throw Error("gen_transform needs an up- or down-situation");
  check_situation(t, s);
  Builder b(unit_tree_of(t), s.online, s.offline);
  auto [x, y] = transform(b, s.kind, s.h, s.x, s.y);
  Situation next = s;
  const int d = t.combinatorial_height();
  if (s.kind == SituationKind::Up && s.h == d - 1) next.kind = SituationKind::Down;
  next.h = height(t, x);
  next.x = x;
  next.y = y;
  return finish(b, next);
}

LowerBoundInstance gen_tree_lowerbound(int k, int d) {
  if (k < 2) throw Error("tree lower bound needs k >= 2");
  if (d < 1) throw Error("tree lower bound needs d >= 1");
  LowerBoundInstance inst;
  inst.family = LowerBoundFamily::Tree;
  inst.k = k;
  inst.d = d;
  inst.tree = kary_unit_tree(k, d);
  const WeightedTree& t = inst.tree;
  const Vertex x0 = t.leaves().front();
  inst.init_online = inst.init_offline = Configuration(k, x0);

  Builder b(std::make_shared<const SubdividedTree>(t), inst.init_online, inst.init_offline);
  b.offline_move(0, t.parent(x0), 1);
  Vertex x = x0, y = t.parent(x0);
  for (int h = 0; h <= d - 1; ++h) std::tie(x, y) = transform(b, SituationKind::Up, h, x, y);
  for (int h = d; h >= 2; --h) std::tie(x, y) = transform(b, SituationKind::Down, h, x, y);
  b.simple(y);

  inst.seq = b.seq();
  inst.offline_schedule = b.schedule();
  inst.predicted_dc = to_int64(tree_lowerbound_formula(k, d));
  inst.predicted_opt = 1;
  return inst;
}

namespace {

class HstBuilder {
 public:
  HstBuilder(Builder& b, std::int64_t alpha) : b_(b), alpha_(alpha) {}

  // Serves `pairs` (matched positions anywhere) inside the subtree of r.
  void phase(Vertex r, const std::vector<Vertex>& pairs, Vertex target, bool top) {
    const WeightedTree& t = b_.tree().base();
    if (t.is_leaf(r)) return;
    const int kk = static_cast<int>(pairs.size());
    if (kk == 0) return;
    std::vector<Vertex> others;
    for (Vertex c : t.children(r)) {
      if (!t.is_ancestor(c, target) && static_cast<int>(others.size()) < kk) others.push_back(c);
    }
    if (static_cast<int>(others.size()) < kk) throw Error("HST branching too small for the lower bound");
    std::vector<Vertex> leaf(kk);
    for (int i = 0; i < kk; ++i) {
      leaf[i] = leftmost_leaf(t, others[i]);
      b_.relocate_pair(pairs[i], leaf[i]);
    }
    if (top) {
      const Vertex from = leaf[kk - 1];
      b_.offline_move(b_.offline_at(from), target, t.upward_distance(from, target));
    }
    b_.simple(target);
    for (int i = 1; i < kk; ++i) {
      const Vertex s = others[i - 1];
      if (!t.is_leaf(s)) {
        for (std::int64_t rep = 0; rep + 1 < alpha_; ++rep) {
          std::vector<Vertex> held = matched_in(r);
          if (static_cast<int>(held.size()) != i) throw Error("lower-bound invariant lost");
          phase(s, held, unmatched_offline_in(s), false);
        }
      }
      cover(s);
    }
  }

 private:
  std::vector<Vertex> within(const Configuration& c, Vertex r) const {
    std::vector<Vertex> out;
    for (Vertex v : c) {
      if (b_.unit().is_ancestor(r, v)) out.push_back(v);
    }
    return out;
  }

  std::vector<Vertex> matched_in(Vertex r) const {
    return matched_positions(within(b_.online(), r), within(b_.offline(), r));
  }

  Vertex unmatched_offline_in(Vertex s) const {
    std::vector<Vertex> extra = difference(within(b_.offline(), s), within(b_.online(), s));
    if (extra.size() != 1) throw Error("expected one unmatched offline server in the subtree");
    return extra.front();
  }

  // Requests uncovered offline positions in s until Double Coverage covers all.
  void cover(Vertex s) {
    const std::int64_t cap = static_cast<std::int64_t>(b_.online().size()) * b_.unit().diameter();
    for (std::int64_t it = 0;; ++it) {
      std::vector<Vertex> gap = difference(within(b_.offline(), s), within(b_.online(), s));
      if (gap.empty()) return;
      if (it >= cap) throw Error("cover loop did not converge");
      b_.simple(gap.front());
    }
  }

  Builder& b_;
  std::int64_t alpha_;
};

}  // namespace

LowerBoundInstance gen_hst_lowerbound(int k, int d, std::int64_t alpha) {
  if (k < 1) throw Error("HST lower bound needs k >= 1");
  if (d < 1) throw Error("HST lower bound needs d >= 1");
  if (alpha < 2) throw Error("HST lower bound needs alpha >= 2");
  LowerBoundInstance inst;
  inst.family = LowerBoundFamily::Hst;
  inst.k = k;
  inst.d = d;
  inst.alpha = alpha;
  inst.tree = build_hst(HstSpec::geometric(alpha, d, k + 1));
  const WeightedTree& t = inst.tree;
  const std::vector<Vertex>& top = t.children(t.root());
  const Vertex target = leftmost_leaf(t, top[0]);
  for (int i = 1; i <= k; ++i) inst.init_online.push_back(leftmost_leaf(t, top[i]));
  inst.init_offline = inst.init_online;

  Builder b(std::make_shared<const SubdividedTree>(t), inst.init_online, inst.init_offline);
  HstBuilder(b, alpha).phase(t.root(), inst.init_online, target, true);

  inst.seq = b.seq();
  inst.offline_schedule = b.schedule();
  inst.predicted_dc = to_int64(hst_lowerbound_formula(k, d, alpha));
  inst.predicted_opt = hst_root_leaf_distance(alpha, d);

  // Same schedule, but an extra server waits at the target and the mover stays.
  const OfflineSchedule& main = inst.offline_schedule;
  const ScheduledMove& mv = main.moves.front();
  OfflineSchedule extra;
  extra.initial = main.initial;
  extra.initial.push_back(target);
  extra.server_of = main.server_of;
  for (std::size_t i = mv.before; i < extra.server_of.size(); ++i) {
    if (extra.server_of[i] == mv.server) extra.server_of[i] = k;
  }
  extra.final_config = main.final_config;
  extra.final_config.push_back(main.final_config[mv.server]);
  extra.final_config[mv.server] = mv.from;
  inst.extra_server_schedule = std::move(extra);
  return inst;
}

std::int64_t hst_pull_distance(const LowerBoundInstance& inst) {
  const WeightedTree& t = inst.tree;
  const std::int64_t far = 2 * t.max_depth() + 2;
  std::vector<Edge> edges = t.edges();
  const Vertex parked = t.size();
  edges.push_back({parked, t.root(), far});
  auto ext = std::make_shared<const SubdividedTree>(WeightedTree::build(t.root(), edges));
  Configuration init = inst.init_online;
  init.push_back(parked);
  Trace tr = run_double_coverage(ext, init, inst.seq);
  return ext->distance(parked, tr.final_config.back());
}

BigInt jmatch_cost(int j, int h) { return 2 * binomial(j + h, h) - 1; }

BigInt transform_cost(int k, int h) { return 2 * binomial(k + h - 1, h + 1); }

BigInt tree_lowerbound_formula(int k, int d) {
  BigInt sum = 0;
  for (int h = 1; h <= d - 1; ++h) sum += 4 * binomial(k + h - 2, h);
  return sum + 2 * binomial(k + d - 2, d) + 1;
}

BigInt hst_lowerbound_formula(int k, int d, std::int64_t alpha) {
  BigInt p = 1;
  for (int i = 0; i < d - 1; ++i) p *= alpha - 1;
  return p * c_kd(k, d);
}

}  // namespace ktaxi
