#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ktaxi/double_coverage.hpp"

namespace ktaxi {

// An online assignment of altitudes on the two-leaf unit star (root 0,
// leaves 1 and 2). `respond` fixes the altitudes after request t knowing only
// the requests up to t.
class DualStrategy {
 public:
  virtual ~DualStrategy() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::int64_t> initial() { return {0, 0, 0}; }
  virtual std::vector<std::int64_t> respond(const Request& r, const std::vector<std::int64_t>& prev) = 0;
};

std::unique_ptr<DualStrategy> make_static_strategy();
// Raises the requested leaf by one on every simple request.
std::unique_ptr<DualStrategy> make_raise_requested_strategy();
// Raises random vertices by random amounts, then repairs slopes upwards.
std::unique_ptr<DualStrategy> make_random_strategy(std::uint64_t seed);

// Raises vertices (never lowers) until every leaf is within 1 of the root.
void repair_slopes(std::vector<std::int64_t>& a);

struct GadgetRecord {
  std::size_t first_request = 0;
  bool relocated = false;
  std::int64_t dual = 0;             // D summed over the gadget
  std::int64_t cumulative_dual = 0;
  std::int64_t cumulative_opt = 0;
};

struct AdversaryTranscript {
  std::string strategy;
  RequestSequence requests;  // request 0 is a free opening request
  std::vector<std::vector<std::int64_t>> altitudes;  // row t = after request t; row 0 initial
  std::vector<std::int64_t> dual_per_request;
  std::vector<GadgetRecord> gadgets;
  std::int64_t total_dual = 0;
  std::int64_t opt = 0;
  bool feasible = true;
  std::string violation;
};

AdversaryTranscript forward_adversary(DualStrategy& strategy, int rounds);

}  // namespace ktaxi
