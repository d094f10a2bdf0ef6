#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ktaxi/double_coverage.hpp"

namespace ktaxi {

// Finite metric with integral distances, stored row-major.
class MetricSpace {
 public:
  MetricSpace() = default;
  // Throws Error unless `dist` is a metric with positive off-diagonal entries.
  MetricSpace(std::vector<std::string> names, std::vector<std::int64_t> dist);

  int size() const { return static_cast<int>(names_.size()); }
  std::int64_t operator()(int a, int b) const { return dist_.at(static_cast<std::size_t>(a) * size() + b); }
  const std::string& name(int p) const { return names_.at(p); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::int64_t>& matrix() const { return dist_; }

  std::int64_t min_distance() const;  // 1 for a single point
  std::int64_t max_distance() const;
  double aspect_ratio() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::int64_t> dist_;
};

// Shortest-path closure of a complete graph with weights uniform in [1, max_weight].
MetricSpace random_metric(int n, std::int64_t max_weight, std::mt19937_64& rng);
// Points on a line at the given distinct integer coordinates.
MetricSpace line_metric(const std::vector<std::int64_t>& coords);
// n points on a line with aspect ratio exactly `aspect`: 0, 1, aspect and
// n-3 further distinct integers in between.
MetricSpace random_line_metric(int n, std::int64_t aspect, std::mt19937_64& rng);

struct HstEmbedding {
  WeightedTree hst;
  std::vector<Vertex> leaf_of;  // point -> leaf
  std::int64_t alpha = 2;
  int depth = 1;
  std::uint64_t seed = 0;

  std::int64_t tree_distance(int a, int b) const { return hst.distance(leaf_of[a], leaf_of[b]); }
};

// Smallest integer alpha >= 2 with alpha^d >= aspect ratio.
std::int64_t embedding_alpha(const MetricSpace& m, int d);

// FRT decomposition with one random permutation and one radius factor
// beta in [1/2, 1). Cluster radius at level l is beta * alpha^l * min_distance
// and the edge above a level-l cluster has length alpha^(l+1) * min_distance,
// so leaves sit at depth d and no distance shrinks.
HstEmbedding frt_embed(const MetricSpace& m, int d, std::uint64_t seed);

// Throws Error if any pair is contracted.
void check_non_contraction(const MetricSpace& m, const HstEmbedding& e);

struct MetricRun {
  HstEmbedding embedding;
  Trace trace;
  std::int64_t hst_cost = 0;
  std::int64_t metric_cost = 0;
  // Metric length and HST length of every leaf-to-leaf server trip.
  std::vector<std::pair<std::int64_t, std::int64_t>> trips;
};

// `init` and the request endpoints are point indices. A server is charged the
// metric distance whenever it reaches a leaf other than the one it last left.
MetricRun run_on_metric(const MetricSpace& m, const std::vector<int>& init,
                        const RequestSequence& seq, int d, std::uint64_t seed);

struct DistortionStats {
  double max = 0;
  double mean = 0;
  double min = 0;
  double distortion = 0;  // largest per-pair mean
  std::vector<double> per_pair_mean;  // pairs (a < b) in lexicographic order
  std::vector<double> per_seed_mean;
};

DistortionStats distortion_stats(const MetricSpace& m, int d, const std::vector<std::uint64_t>& seeds);

// C * d * aspect^(1/d) * max(1, log_aspect n) with the calibration constant C,
// compared against the largest per-pair expected stretch.
inline constexpr double kStretchCalibration = 4.0;
double stretch_bound(const MetricSpace& m, int d);

}  // namespace ktaxi
