#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ktaxi/tree.hpp"

namespace ktaxi {

enum class RequestKind { Simple, Relocate };

struct Request {
  RequestKind kind = RequestKind::Simple;
  Vertex s = kNoVertex;
  Vertex d = kNoVertex;  // equals s for simple requests

  static Request simple(Vertex s) { return {RequestKind::Simple, s, s}; }
  static Request relocate(Vertex s, Vertex d) { return {RequestKind::Relocate, s, d}; }
  bool is_simple() const { return kind == RequestKind::Simple; }
  bool operator==(const Request&) const = default;
};

using RequestSequence = std::vector<Request>;

// Server index -> short-vertex position.
using Configuration = std::vector<Vertex>;

// Every relocation must directly follow an event that leaves a server at its
// source: a simple request at s or a relocation ending at s. Returns the index
// of the first offending request, if any.
std::optional<std::size_t> first_invalid_relocation(const RequestSequence& seq);
void validate_sequence(const WeightedTree& t, const RequestSequence& seq, bool leaves_only = false);

struct Move {
  int server = -1;
  Vertex from = kNoVertex;
  Vertex to = kNoVertex;
};

// One iteration of the Double Coverage while-loop.
struct SmallStep {
  std::vector<int> up;        // servers moving towards the root
  std::optional<int> down;    // at most one server moves away from the root
  std::vector<Move> moves;    // one unit move per server in up and down
};

struct RequestEvent {
  Request request;
  std::vector<SmallStep> steps;  // simple requests
  std::optional<Move> relocation;  // relocation requests
  std::int64_t cost_up = 0;
  std::int64_t cost_down = 0;
};

struct Trace {
  std::shared_ptr<const SubdividedTree> tree;
  Configuration initial;
  std::vector<RequestEvent> events;
  std::int64_t cost_up = 0;
  std::int64_t cost_down = 0;
  Configuration final_config;

  std::int64_t total_cost() const { return cost_up + cost_down; }
  std::size_t step_count() const;
};

// Stateful Double Coverage runner. Co-located servers: only the lowest-index
// one is unobstructed. Relocations move the lowest-index server at s.
class DoubleCoverage {
 public:
  DoubleCoverage(std::shared_ptr<const SubdividedTree> tree, Configuration initial);

  const RequestEvent& serve(const Request& r);
  const Configuration& configuration() const { return config_; }
  const Trace& trace() const { return trace_; }
  Trace take_trace() &&;

 private:
  SmallStep step_towards(Vertex target) const;

  std::shared_ptr<const SubdividedTree> tree_;
  Configuration config_;
  Trace trace_;
  std::int64_t step_cap_ = 0;
};

Trace run_double_coverage(std::shared_ptr<const SubdividedTree> tree, const Configuration& init,
                          const RequestSequence& seq);

// Servers that Double Coverage may move towards `target`, re-derived from
// distances only (independent of the simulator's path walk).
std::vector<int> unobstructed_servers(const SubdividedTree& t, const Configuration& config,
                                      Vertex target);

struct TraceReport {
  bool clean = true;
  std::string first_violation;
  std::size_t event_index = 0;
  std::size_t step_index = 0;
};

TraceReport verify_trace(const Trace& trace);

struct CostSummary {
  std::int64_t total = 0;
  std::int64_t up = 0;
  std::int64_t down = 0;
  std::vector<std::int64_t> per_request;
};

CostSummary cost_summary(const Trace& trace);

// Applies every event of the trace to the initial configuration.
Configuration replay(const Trace& trace);

}  // namespace ktaxi
