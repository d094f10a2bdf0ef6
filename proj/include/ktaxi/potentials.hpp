#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ktaxi/double_coverage.hpp"
#include "ktaxi/tables.hpp"

namespace ktaxi {

// Weighted heights of the node layers of an HST: alpha_0 = 0 < ... < alpha_d.
struct HstLayerHeights {
  std::vector<std::int64_t> alpha;
  int depth() const { return static_cast<int>(alpha.size()) - 1; }
};

HstLayerHeights layer_heights(const WeightedTree& hst);

// -sum over server pairs of the weighted depth of their LCA.
std::int64_t psi_kserver(const SubdividedTree& t, const Configuration& cfg);

// sum_i sum_{l<d} c_{i,l} * max(alpha_l, min(h_i, alpha_{l+1})) with the
// heights h_0 <= ... <= h_{k-1} sorted.
std::int64_t psi_ktaxi_hst(const SubdividedTree& hst, const HstLayerHeights& layers, const Configuration& cfg);

enum class PotentialKind { KServer, KTaxiHst };

struct PotentialReport {
  bool clean = true;
  std::string first_violation;
  std::size_t steps_checked = 0;
  std::size_t relocations_checked = 0;
  std::int64_t psi_initial = 0;
  std::int64_t psi_final = 0;
  std::int64_t worst_free_step = 0;  // max |U| + dPsi over steps with B empty
};

// Relocations keep the potential (KTaxiHst only), a step with B empty has
// |U| + dPsi <= c and a step with B = {j} has |U| + dPsi <= 0.
PotentialReport check_step_inequalities(const Trace& trace, PotentialKind kind, std::int64_t c);

// Minimum-cost perfect matching between two configurations under tree distance.
std::int64_t matching_potential(const WeightedTree& t, const Configuration& online, const Configuration& offline);

// Sum of pairwise distances; the additive constant of the classic k-server
// bound DC <= k * OPT + sum_{i<j} d(init_i, init_j).
std::int64_t pairwise_spread(const WeightedTree& t, const Configuration& cfg);

}  // namespace ktaxi
