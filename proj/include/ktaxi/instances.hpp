#pragma once

#include <cstdint>
#include <random>

#include "ktaxi/double_coverage.hpp"

namespace ktaxi {

struct Scenario {
  WeightedTree tree;
  Configuration initial;
  RequestSequence requests;

  int k() const { return static_cast<int>(initial.size()); }
};

enum class TreeFamily { Hst, UnweightedKary, RandomWeighted };

struct InstanceParams {
  TreeFamily family = TreeFamily::Hst;
  int k = 2;
  int depth = 2;
  int branching = 3;          // Hst and UnweightedKary
  std::int64_t alpha = 2;     // Hst level ratio
  int vertices = 10;          // RandomWeighted
  std::int64_t max_weight = 5;  // RandomWeighted
  std::size_t length = 20;
  double relocation_fraction = 0.3;
};

// Seeded scenario. On HSTs servers and requests live on leaves; otherwise on
// any original vertex. Relocations only start where the previous request left
// a server, so the sequence is valid by construction.
Scenario random_instance(const InstanceParams& p, std::uint64_t seed);

// Tree of exactly the given combinatorial height with random shape and weights.
WeightedTree random_weighted_tree(std::mt19937_64& rng, int vertices, int depth, std::int64_t max_weight);

}  // namespace ktaxi
