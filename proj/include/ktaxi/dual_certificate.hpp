#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ktaxi/double_coverage.hpp"
#include "ktaxi/tables.hpp"

namespace ktaxi {

enum class CertMode { Monotone, Banded };

// Reverse-time update attached to one small step: the altitudes of the
// component below `top`, minus the subtrees hanging below `frontier`, were
// lower by `delta` before the step than after it.
struct CertEvent {
  std::size_t step = 0;  // global small-step index in forward order
  Vertex top = kNoVertex;
  std::vector<Vertex> frontier;
  std::int64_t delta = 0;
};

struct AltitudeCertificate {
  CertMode mode = CertMode::Monotone;
  std::optional<BandTable> bands;  // Banded only
  std::int64_t base = 0;           // uniform altitude after the last request
  std::vector<CertEvent> reverse_events;

  // Scale that turns the certificate into a feasible dual solution.
  BigInt scale() const { return bands ? bands->c : BigInt(1); }
};

// Small steps of a trace in forward order.
struct StepRef {
  std::size_t event = 0;
  std::size_t step = 0;
};
std::vector<StepRef> flatten_steps(const Trace& trace);

AltitudeCertificate build_certificate_hst(const Trace& trace);
// Band table for k = max(2, servers) and depth d; throws if the tree is deeper.
AltitudeCertificate build_certificate_weighted(const Trace& trace, int d);

// Vertices whose altitude an event changes.
std::vector<Vertex> event_component(const SubdividedTree& t, const CertEvent& e);

// Walks the certificate from the final altitudes backwards. For every small
// step (latest first) `visit` receives the step index and the altitudes
// before and after it.
using AltitudeVisitor = std::function<void(std::size_t step, const std::vector<std::int64_t>& before,
                                           const std::vector<std::int64_t>& after)>;
void replay_altitudes(const AltitudeCertificate& cert, const SubdividedTree& t, const AltitudeVisitor& visit);

// Altitudes at request boundaries: row t holds A after request t (row 0 is
// the initial state).
std::vector<std::vector<std::int64_t>> altitudes_at_requests(const AltitudeCertificate& cert,
                                                             const Trace& trace);

struct DualEvaluation {
  std::vector<std::int64_t> step_delta;   // Delta D per small step
  std::vector<std::int64_t> per_request;  // D_t
  std::int64_t total = 0;
};

DualEvaluation evaluate_dual(const AltitudeCertificate& cert, const Trace& trace);

struct FeasibilityReport {
  bool clean = true;
  bool scaled_feasible = true;  // slopes / scale() within [-1, 1]
  std::string first_violation;
  std::size_t step = 0;
};

FeasibilityReport verify_feasibility(const AltitudeCertificate& cert, const SubdividedTree& t);

struct GuaranteeReport {
  bool clean = true;
  std::size_t steps_checked = 0;
  std::size_t relocations_checked = 0;
  std::string first_violation;
};

// Monotone: B empty gives Delta D >= 1, B = {j} gives Delta D >= 0.
// Banded: |U| + |B| <= Delta D. Both: relocations have D_t = 0.
GuaranteeReport check_guarantees(const AltitudeCertificate& cert, const Trace& trace,
                                 const DualEvaluation& eval);

struct LambdaB {
  // Indexed [t][u]; t runs over request boundaries 0..T (lambda row 0 unused).
  std::vector<std::vector<std::int64_t>> lambda;
  std::vector<std::vector<std::int64_t>> b;
  // Only rows of relocation requests are filled; entries in {-1, 0, 1}.
  std::vector<std::vector<int>> xi;
  std::int64_t objective = 0;  // original dual objective
};

// Throws Error when an original-dual constraint fails or the objective
// differs from the altitude objective.
LambdaB transform_to_lambda_b(const AltitudeCertificate& cert, const Trace& trace);

struct WeakDualityReport {
  bool holds = false;
  std::int64_t dual = 0;
  std::int64_t opt = 0;
  BigInt scale = 1;
};

// Checks dual <= scale * opt, i.e. the scaled dual stays below the optimum.
WeakDualityReport weak_duality_check(const DualEvaluation& eval, std::int64_t opt_fixed,
                                     const BigInt& scale = 1);

}  // namespace ktaxi
