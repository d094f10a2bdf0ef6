#include "ktaxi/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ktaxi {

MetricSpace::MetricSpace(std::vector<std::string> names, std::vector<std::int64_t> dist)
    : names_(std::move(names)), dist_(std::move(dist)) {
  const std::size_t n = names_.size();
  if (n == 0) throw Error("metric has no points");
  if (dist_.size() != n * n) throw Error("distance matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (dist_[a * n + a] != 0) throw Error("non-zero self distance at point " + names_[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (dist_[a * n + b] != dist_[b * n + a]) throw Error("distance matrix is not symmetric");
      if (a != b && dist_[a * n + b] <= 0) throw Error("distinct points at non-positive distance");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (dist_[a * n + c] > dist_[a * n + b] + dist_[b * n + c]) {
          throw Error("triangle inequality fails for " + names_[a] + ", " + names_[b] + ", " + names_[c]);
        }
      }
    }
  }
}

std::int64_t MetricSpace::min_distance() const {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int a = 0; a < size(); ++a) {
    for (int b = a + 1; b < size(); ++b) best = std::min(best, (*this)(a, b));
  }
  return size() < 2 ? 1 : best;
}

std::int64_t MetricSpace::max_distance() const {
  return size() < 2 ? 1 : *std::max_element(dist_.begin(), dist_.end());
}

double MetricSpace::aspect_ratio() const {
  return static_cast<double>(max_distance()) / static_cast<double>(min_distance());
}

MetricSpace random_metric(int n, std::int64_t max_weight, std::mt19937_64& rng) {
  if (n < 1 || max_weight < 1) throw Error("random metric needs n >= 1 and max_weight >= 1");
  std::uniform_int_distribution<std::int64_t> w(1, max_weight);
  std::vector<std::int64_t> d(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) d[a * n + b] = d[b * n + a] = w(rng);
  }
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) d[a * n + b] = std::min(d[a * n + b], d[a * n + c] + d[c * n + b]);
    }
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return MetricSpace(std::move(names), std::move(d));
}

MetricSpace line_metric(const std::vector<std::int64_t>& coords) {
  const std::size_t n = coords.size();
  std::vector<std::int64_t> d(n * n);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back("x" + std::to_string(coords[a]));
    for (std::size_t b = 0; b < n; ++b) d[a * n + b] = std::llabs(coords[a] - coords[b]);
  }
  return MetricSpace(std::move(names), std::move(d));
}

MetricSpace random_line_metric(int n, std::int64_t aspect, std::mt19937_64& rng) {
  if (n < 3 || aspect < n - 1) throw Error("line metric needs n >= 3 and aspect >= n - 1");
  std::vector<std::int64_t> coords{0, 1, aspect};
  std::uniform_int_distribution<std::int64_t> pick(2, aspect - 1);
  while (static_cast<int>(coords.size()) < n) {
    const std::int64_t x = pick(rng);
    if (std::find(coords.begin(), coords.end(), x) == coords.end()) coords.push_back(x);
  }
  std::sort(coords.begin(), coords.end());
  return line_metric(coords);
}

std::int64_t embedding_alpha(const MetricSpace& m, int d) {
  if (d < 1) throw Error("embedding depth must be positive");
  const std::int64_t lo = m.min_distance(), hi = m.max_distance();
  for (std::int64_t a = 2;; ++a) {
    // a^d * lo >= hi, computed without overflow.
    std::int64_t p = lo;
    int e = 0;
    while (e < d && p < hi) {
      p *= a;
      ++e;
    }
    if (p >= hi) return a;
  }
}

HstEmbedding frt_embed(const MetricSpace& m, int d, std::uint64_t seed) {
  HstEmbedding e;
  e.depth = d;
  e.seed = seed;
  e.alpha = embedding_alpha(m, d);
  const std::int64_t delta = m.min_distance();
  std::mt19937_64 rng(seed);
  std::vector<int> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const double beta = std::uniform_real_distribution<double>(0.5, 1.0)(rng);

  std::vector<std::int64_t> power(d + 1, 1);
  for (int l = 1; l <= d; ++l) power[l] = power[l - 1] * e.alpha;

  struct Cluster {
    Vertex id;
    std::vector<int> points;
  };
  std::vector<Edge> edges;
  Vertex next = 1;
  std::vector<int> all(m.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<Cluster> level{{0, all}};
  for (int l = d - 1; l >= 0; --l) {
    const double radius = beta * static_cast<double>(power[l] * delta);
    // Each point joins the first center in permutation order that reaches it.
    std::vector<int> center(m.size(), -1);
    for (int v = 0; v < m.size(); ++v) {
      for (int u : perm) {
        if (static_cast<double>(m(u, v)) <= radius) {
          center[v] = u;
          break;
        }
      }
    }
    std::vector<Cluster> below;
    for (const Cluster& c : level) {
      for (int u : perm) {
        std::vector<int> part;
        for (int v : c.points) {
          if (center[v] == u) part.push_back(v);
        }
        if (part.empty()) continue;
        edges.push_back({next, c.id, power[l + 1] * delta});
        below.push_back({next++, std::move(part)});
      }
    }
    level = std::move(below);
  }
  e.leaf_of.assign(m.size(), kNoVertex);
  for (const Cluster& c : level) {
    if (c.points.size() != 1) throw Error("bottom-level cluster is not a singleton");
    e.leaf_of[c.points.front()] = c.id;
  }
  e.hst = WeightedTree::build(0, edges);
  check_non_contraction(m, e);
  return e;
}

void check_non_contraction(const MetricSpace& m, const HstEmbedding& e) {
  for (int a = 0; a < m.size(); ++a) {
    for (int b = a + 1; b < m.size(); ++b) {
      if (e.tree_distance(a, b) < m(a, b)) {
        throw Error("embedding contracts " + m.name(a) + " and " + m.name(b));
      }
    }
  }
}

MetricRun run_on_metric(const MetricSpace& m, const std::vector<int>& init, const RequestSequence& seq,
                        int d, std::uint64_t seed) {
  auto point_ok = [&](int p) { return p >= 0 && p < m.size(); };
  for (int p : init) {
    if (!point_ok(p)) throw Error("initial point " + std::to_string(p) + " not in metric");
  }
  for (const Request& r : seq) {
    if (!point_ok(r.s) || !point_ok(r.d)) throw Error("request point not in metric");
  }
  MetricRun run;
  run.embedding = frt_embed(m, d, seed);
  const HstEmbedding& e = run.embedding;
  std::vector<int> point_of(e.hst.size(), -1);
  for (int p = 0; p < m.size(); ++p) point_of[e.leaf_of[p]] = p;

  Configuration config;
  for (int p : init) config.push_back(e.leaf_of[p]);
  RequestSequence mapped;
  for (const Request& r : seq) {
    mapped.push_back(r.is_simple() ? Request::simple(e.leaf_of[r.s])
                                   : Request::relocate(e.leaf_of[r.s], e.leaf_of[r.d]));
  }
  auto tree = std::make_shared<const SubdividedTree>(e.hst);
  run.trace = run_double_coverage(tree, config, mapped);
  run.hst_cost = run.trace.total_cost();

  std::vector<int> last(init);
  std::vector<std::int64_t> travelled(init.size(), 0);
  for (const RequestEvent& ev : run.trace.events) {
    for (const SmallStep& st : ev.steps) {
      for (const Move& mv : st.moves) {
        ++travelled[mv.server];
        if (!tree->is_original(mv.to) || point_of[mv.to] < 0) continue;
        const int p = point_of[mv.to];
        if (p != last[mv.server]) {
          run.trips.emplace_back(m(last[mv.server], p), travelled[mv.server]);
          run.metric_cost += m(last[mv.server], p);
        }
        last[mv.server] = p;
        travelled[mv.server] = 0;
      }
    }
    if (ev.relocation) {
      last[ev.relocation->server] = point_of[ev.relocation->to];
      travelled[ev.relocation->server] = 0;
    }
  }
  return run;
}

DistortionStats distortion_stats(const MetricSpace& m, int d, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error("distortion statistics need at least one seed");
  DistortionStats s;
  const int n = m.size();
  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  s.per_pair_mean.assign(pairs, 0.0);
  s.min = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed : seeds) {
    HstEmbedding e = frt_embed(m, d, seed);
    double sum = 0;
    std::size_t i = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b, ++i) {
        const double st = static_cast<double>(e.tree_distance(a, b)) / static_cast<double>(m(a, b));
        s.per_pair_mean[i] += st;
        s.max = std::max(s.max, st);
        s.min = std::min(s.min, st);
        sum += st;
      }
    }
    s.per_seed_mean.push_back(pairs ? sum / static_cast<double>(pairs) : 1.0);
  }
  for (double& v : s.per_pair_mean) {
    v /= static_cast<double>(seeds.size());
    s.distortion = std::max(s.distortion, v);
  }
  s.mean = std::accumulate(s.per_seed_mean.begin(), s.per_seed_mean.end(), 0.0) /
           static_cast<double>(seeds.size());
  if (pairs == 0) s.min = s.max = s.distortion = 1.0;
  return s;
}

double stretch_bound(const MetricSpace& m, int d) {
  const double aspect = std::max(2.0, m.aspect_ratio());
  const double log_n = std::max(1.0, std::log(static_cast<double>(m.size())) / std::log(aspect));
  return kStretchCalibration * d * std::pow(aspect, 1.0 / d) * log_n;
}

}  // namespace ktaxi
