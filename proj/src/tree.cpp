#include "ktaxi/tree.hpp"

#include <algorithm>
#include <numeric>

namespace ktaxi {

WeightedTree WeightedTree::build(Vertex root, std::span<const Edge> edges,
                                 std::vector<std::string> labels) {
  if (root < 0) throw Error("root id must be non-negative");
  Vertex max_id = root;
  for (const auto& e : edges) {
    if (e.child < 0 || e.parent < 0) throw Error("negative vertex id in edge list");
    max_id = std::max({max_id, e.child, e.parent});
  }
  const int n = max_id + 1;

  WeightedTree t;
  t.root_ = root;
  t.parent_.assign(n, kNoVertex);
  t.weight_.assign(n, 0);
  t.children_.assign(n, {});
  std::vector<bool> mentioned(n, false);
  mentioned[root] = true;
  for (const auto& e : edges) {
    if (e.weight < 1) {
      throw Error("non-positive weight on edge " + std::to_string(e.child) + "->" +
                  std::to_string(e.parent));
    }
    if (e.child == root) throw Error("root " + std::to_string(root) + " listed as a child");
    if (e.child == e.parent) throw Error("self loop at vertex " + std::to_string(e.child));
    if (t.parent_[e.child] != kNoVertex) {
      throw Error("vertex " + std::to_string(e.child) + " has more than one parent");
    }
    t.parent_[e.child] = e.parent;
    t.weight_[e.child] = e.weight;
    mentioned[e.child] = mentioned[e.parent] = true;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!mentioned[v]) throw Error("vertex " + std::to_string(v) + " is disconnected");
    if (v != root) t.children_[t.parent_[v]].push_back(v);
  }
  for (auto& c : t.children_) std::sort(c.begin(), c.end());

  t.depth_.assign(n, 0);
  t.comb_depth_.assign(n, 0);
  t.tin_.assign(n, -1);
  t.tout_.assign(n, -1);
  int clock = 0;
  // Iterative DFS: (vertex, next child index).
  std::vector<std::pair<Vertex, std::size_t>> stack{{root, 0}};
  t.tin_[root] = clock++;
  t.preorder_.push_back(root);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < t.children_[v].size()) {
      Vertex c = t.children_[v][next++];
      t.depth_[c] = t.depth_[v] + t.weight_[c];
      t.comb_depth_[c] = t.comb_depth_[v] + 1;
      t.tin_[c] = clock++;
      t.preorder_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      t.tout_[v] = clock++;
      stack.pop_back();
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (t.tin_[v] < 0) throw Error("cycle detected through vertex " + std::to_string(v));
  }

  for (Vertex v = 0; v < n; ++v) {
    if (!t.children_[v].empty()) continue;
    if (!t.leaves_.empty()) {
      Vertex first = t.leaves_.front();
      if (t.depth_[v] != t.depth_[first]) t.uniform_weighted_ = false;
      if (t.comb_depth_[v] != t.comb_depth_[first]) t.uniform_comb_ = false;
    }
    t.leaves_.push_back(v);
    t.max_depth_ = std::max(t.max_depth_, t.depth_[v]);
    t.max_comb_depth_ = std::max(t.max_comb_depth_, t.comb_depth_[v]);
  }

  if (!labels.empty()) {
    if (static_cast<int>(labels.size()) != n) {
      throw Error("label count " + std::to_string(labels.size()) + " does not match " +
                  std::to_string(n) + " vertices");
    }
    t.labels_ = std::move(labels);
  }
  return t;
}

bool WeightedTree::is_ancestor(Vertex a, Vertex v) const {
  check(a);
  check(v);
  return tin_[a] <= tin_[v] && tout_[v] <= tout_[a];
}

Vertex WeightedTree::lca(Vertex u, Vertex v) const {
  check(u);
  check(v);
  while (comb_depth_[u] > comb_depth_[v]) u = parent_[u];
  while (comb_depth_[v] > comb_depth_[u]) v = parent_[v];
  while (u != v) {
    u = parent_[u];
    v = parent_[v];
  }
  return u;
}

std::int64_t WeightedTree::distance(Vertex u, Vertex v) const {
  return depth(u) + depth(v) - 2 * depth(lca(u, v));
}

std::int64_t WeightedTree::upward_distance(Vertex from, Vertex to) const {
  return depth(from) - depth(lca(from, to));
}

std::int64_t WeightedTree::diameter() const {
  // Two farthest leaves; n is small enough for the quadratic scan.
  std::int64_t best = 0;
  for (Vertex a : leaves_) {
    for (Vertex b : leaves_) best = std::max(best, distance(a, b));
  }
  for (Vertex a : leaves_) best = std::max(best, depth(a));
  return best;
}

const std::string& WeightedTree::label(Vertex v) const {
  static const std::string kEmpty;
  check(v);
  return labels_.empty() ? kEmpty : labels_[v];
}

std::optional<Vertex> WeightedTree::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Vertex>(it - labels_.begin());
}

std::vector<Edge> WeightedTree::edges() const {
  std::vector<Edge> out;
  for (Vertex v = 0; v < size(); ++v) {
    if (v != root_) out.push_back({v, parent_[v], weight_[v]});
  }
  return out;
}

SubdividedTree::SubdividedTree(WeightedTree base) : base_(std::move(base)) {
  const int n = base_.size();
  std::vector<Edge> unit_edges;
  origin_.resize(n);
  for (Vertex v = 0; v < n; ++v) origin_[v] = {v, 0};
  Vertex next = n;
  for (Vertex c = 0; c < n; ++c) {
    if (c == base_.root()) continue;
    Vertex below = c;
    for (std::int64_t k = 1; k < base_.weight(c); ++k) {
      origin_.push_back({c, k});
      unit_edges.push_back({below, next, 1});
      below = next++;
    }
    unit_edges.push_back({below, base_.parent(c), 1});
  }
  std::vector<std::string> labels;
  if (base_.has_labels()) {
    labels = base_.labels();
    for (Vertex v = n; v < next; ++v) {
      labels.push_back(base_.label(origin_[v].long_child) + "+" +
                       std::to_string(origin_[v].offset));
    }
  }
  unit_ = WeightedTree::build(base_.root(), unit_edges, std::move(labels));
}

int SubdividedTree::long_depth(Vertex v) const {
  return base_.combinatorial_depth(origin_.at(v).long_child);
}

std::int64_t SubdividedTree::weighted_height(Vertex v) const {
  if (!unit_.uniform_leaf_depth()) {
    throw Error("weighted height is undefined: leaves have different weighted depths");
  }
  return unit_.max_depth() - unit_.depth(v);
}

VertexMeasures SubdividedTree::measures(Vertex v) const {
  VertexMeasures m;
  m.weighted_depth = unit_.depth(v);
  m.combinatorial_depth = long_depth(v);
  if (unit_.uniform_leaf_depth()) m.weighted_height = weighted_height(v);
  return m;
}

HstSpec HstSpec::geometric(std::int64_t alpha, int depth, int branching) {
  if (alpha < 1) throw Error("alpha must be >= 1");
  HstSpec spec;
  spec.depth = depth;
  spec.branching = branching;
  for (int level = 0; level < depth; ++level) {
    std::int64_t len = 1;
    for (int e = 0; e < depth - 1 - level; ++e) len *= alpha;
    spec.level_lengths.push_back(len);
  }
  return spec;
}

WeightedTree build_hst(const HstSpec& spec) {
  if (spec.depth < 1) throw Error("HST depth must be positive");
  if (spec.branching < 1) throw Error("HST branching must be positive");
  if (static_cast<int>(spec.level_lengths.size()) != spec.depth) {
    throw Error("HST needs one edge length per level");
  }
  std::vector<Edge> edges;
  std::vector<Vertex> frontier{0};
  Vertex next = 1;
  for (int level = 0; level < spec.depth; ++level) {
    std::vector<Vertex> children;
    for (Vertex p : frontier) {
      for (int b = 0; b < spec.branching; ++b) {
        edges.push_back({next, p, spec.level_lengths[level]});
        children.push_back(next++);
      }
    }
    frontier = std::move(children);
  }
  return WeightedTree::build(0, edges);
}

bool is_hst(const WeightedTree& t, std::optional<std::int64_t> alpha) {
  if (!t.uniform_combinatorial_leaf_depth()) return false;
  const int d = t.combinatorial_height();
  // Per-level edge length must be consistent for uniform weighted depth.
  std::vector<std::int64_t> level(d + 1, 0);
  for (Vertex v = 0; v < t.size(); ++v) {
    if (v == t.root()) continue;
    int cd = t.combinatorial_depth(v);
    if (level[cd] == 0) level[cd] = t.weight(v);
    if (level[cd] != t.weight(v)) return false;
  }
  if (alpha) {
    for (int i = 1; i < d; ++i) {
      if (level[i] != *alpha * level[i + 1]) return false;
    }
  }
  return true;
}

std::int64_t hst_root_leaf_distance(std::int64_t alpha, int depth) {
  std::int64_t sum = 0, p = 1;
  for (int h = 0; h < depth; ++h) {
    sum += p;
    p *= alpha;
  }
  return sum;
}

}  // namespace ktaxi
