#include "ktaxi/instances.hpp"

namespace ktaxi {

WeightedTree random_weighted_tree(std::mt19937_64& rng, int vertices, int depth, std::int64_t max_weight) {
  if (depth < 1 || vertices < depth + 1) throw Error("random tree needs at least depth + 1 vertices");
  std::uniform_int_distribution<std::int64_t> w(1, max_weight);
  std::vector<Edge> edges;
  std::vector<int> level{0};
  // A spine guarantees the requested height.
  for (Vertex v = 1; v <= depth; ++v) {
    edges.push_back({v, v - 1, w(rng)});
    level.push_back(v);
  }
  for (Vertex v = depth + 1; v < vertices; ++v) {
    Vertex p;
    do {
      p = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
    } while (level[p] >= depth);
    edges.push_back({v, p, w(rng)});
    level.push_back(level[p] + 1);
  }
  return WeightedTree::build(0, edges);
}

Scenario random_instance(const InstanceParams& p, std::uint64_t seed) {
  if (p.k < 1) throw Error("need at least one server");
  std::mt19937_64 rng(seed);
  Scenario sc;
  bool leaves_only = false;
  switch (p.family) {
    case TreeFamily::Hst:
      sc.tree = build_hst(HstSpec::geometric(p.alpha, p.depth, p.branching));
      leaves_only = true;
      break;
    case TreeFamily::UnweightedKary: {
      HstSpec spec{p.depth, std::vector<std::int64_t>(p.depth, 1), p.branching};
      sc.tree = build_hst(spec);
      break;
    }
    case TreeFamily::RandomWeighted:
      sc.tree = random_weighted_tree(rng, p.vertices, p.depth, p.max_weight);
      break;
  }
  std::vector<Vertex> points;
  if (leaves_only) {
    points = sc.tree.leaves();
  } else {
    for (Vertex v = 0; v < sc.tree.size(); ++v) points.push_back(v);
  }
  auto pick = [&] { return points[std::uniform_int_distribution<std::size_t>(0, points.size() - 1)(rng)]; };
  for (int i = 0; i < p.k; ++i) sc.initial.push_back(pick());
  std::bernoulli_distribution relocate(p.relocation_fraction);
  while (sc.requests.size() < p.length) {
    if (!sc.requests.empty() && relocate(rng)) {
      sc.requests.push_back(Request::relocate(sc.requests.back().d, pick()));
    } else {
      sc.requests.push_back(Request::simple(pick()));
    }
  }
  return sc;
}

}  // namespace ktaxi
