#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ktaxi {

using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  Vertex child = kNoVertex;
  Vertex parent = kNoVertex;
  std::int64_t weight = 1;
};

// Rooted tree with positive integral edge weights. Vertex ids are dense,
// 0..size()-1. Immutable once built.
class WeightedTree {
 public:
  WeightedTree() = default;

  // Validates the edge list: every vertex but the root appears exactly once as
  // a child, weights are >= 1 and every vertex is reachable from the root.
  static WeightedTree build(Vertex root, std::span<const Edge> edges,
                            std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(parent_.size()); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return parent_.at(check(v)); }
  std::int64_t weight(Vertex v) const { return weight_.at(check(v)); }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(check(v)); }

  std::int64_t depth(Vertex v) const { return depth_.at(check(v)); }
  int combinatorial_depth(Vertex v) const { return comb_depth_.at(check(v)); }
  int combinatorial_height() const { return max_comb_depth_; }
  std::int64_t max_depth() const { return max_depth_; }

  bool is_leaf(Vertex v) const { return children(v).empty(); }
  const std::vector<Vertex>& leaves() const { return leaves_; }
  bool is_ancestor(Vertex a, Vertex v) const;  // a == v counts

  Vertex lca(Vertex u, Vertex v) const;
  std::int64_t distance(Vertex u, Vertex v) const;
  // Length of the part of the u -> v path that moves towards the root.
  std::int64_t upward_distance(Vertex from, Vertex to) const;
  std::int64_t diameter() const;

  // Vertices in preorder (parents before children).
  const std::vector<Vertex>& preorder() const { return preorder_; }

  const std::string& label(Vertex v) const;
  std::optional<Vertex> find(const std::string& label) const;
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::vector<Edge> edges() const;

  // All leaves share a common weighted depth.
  bool uniform_leaf_depth() const { return uniform_weighted_; }
  bool uniform_combinatorial_leaf_depth() const { return uniform_comb_; }

 private:
  Vertex check(Vertex v) const {
    if (v < 0 || v >= size()) throw Error("unknown vertex id " + std::to_string(v));
    return v;
  }

  Vertex root_ = 0;
  std::vector<Vertex> parent_;
  std::vector<std::int64_t> weight_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::int64_t> depth_;
  std::vector<int> comb_depth_;
  std::vector<int> tin_, tout_;
  std::vector<Vertex> preorder_;
  std::vector<Vertex> leaves_;
  std::vector<std::string> labels_;
  std::int64_t max_depth_ = 0;
  int max_comb_depth_ = 0;
  bool uniform_weighted_ = true;
  bool uniform_comb_ = true;
};

// Where a short vertex sits inside the original tree: on the long edge from
// `long_child` to its parent, `offset` short edges above `long_child`.
struct ShortOrigin {
  Vertex long_child = kNoVertex;
  std::int64_t offset = 0;
};

struct VertexMeasures {
  std::int64_t weighted_depth = 0;
  int combinatorial_depth = 0;
  std::optional<std::int64_t> weighted_height;
};

// Unit-length refinement of a WeightedTree. Original vertices keep their ids;
// interior points of long edges get ids >= base().size().
class SubdividedTree {
 public:
  SubdividedTree() = default;
  explicit SubdividedTree(WeightedTree base);

  const WeightedTree& base() const { return base_; }
  const WeightedTree& unit() const { return unit_; }
  int size() const { return unit_.size(); }
  Vertex root() const { return unit_.root(); }
  Vertex parent(Vertex v) const { return unit_.parent(v); }

  bool is_original(Vertex v) const { return v >= 0 && v < base_.size(); }
  const ShortOrigin& origin(Vertex v) const { return origin_.at(v); }

  // Number of long edges on the shortest long-edge path from the root that
  // includes v. For an original vertex this is its combinatorial depth.
  int long_depth(Vertex v) const;

  std::int64_t depth(Vertex v) const { return unit_.depth(v); }
  std::int64_t distance(Vertex u, Vertex v) const { return unit_.distance(u, v); }
  Vertex lca(Vertex u, Vertex v) const { return unit_.lca(u, v); }
  bool is_ancestor(Vertex a, Vertex v) const { return unit_.is_ancestor(a, v); }

  // Throws unless all leaves share a common weighted depth.
  std::int64_t weighted_height(Vertex v) const;
  VertexMeasures measures(Vertex v) const;

 private:
  WeightedTree base_;
  WeightedTree unit_;
  std::vector<ShortOrigin> origin_;
};

struct HstSpec {
  int depth = 1;
  std::vector<std::int64_t> level_lengths;  // root-down, one per level
  int branching = 2;

  // T_{alpha,d}: lengths alpha^{d-1}, ..., alpha^0.
  static HstSpec geometric(std::int64_t alpha, int depth, int branching);
};

// Complete tree of the given depth and branching; vertex 0 is the root and
// ids follow breadth-first order.
WeightedTree build_hst(const HstSpec& spec);

// Uniform combinatorial leaf depth and, when `alpha` is given, every edge at
// combinatorial depth i+1 is alpha times shorter than the edge at depth i.
bool is_hst(const WeightedTree& t, std::optional<std::int64_t> alpha = std::nullopt);

// Root-to-leaf distance of T_{alpha,d}: sum of alpha^h for h < d.
std::int64_t hst_root_leaf_distance(std::int64_t alpha, int depth);

}  // namespace ktaxi
