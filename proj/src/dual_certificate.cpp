#include "ktaxi/dual_certificate.hpp"

#include <algorithm>

namespace ktaxi {
namespace {

using Altitudes = std::vector<std::int64_t>;

struct BandLimits {
  std::vector<std::int64_t> lo, hi;  // indexed by depth 1..d
};

BandLimits limits_of(const BandTable& b) {
  BandLimits l{{0}, {0}};
  for (int i = 1; i <= b.d; ++i) {
    l.lo.push_back(to_int64(b.lower(i)));
    l.hi.push_back(to_int64(b.upper(i)));
  }
  return l;
}

std::int64_t slope(const SubdividedTree& t, const Altitudes& a, Vertex u) {
  return a[u] - a[t.parent(u)];
}

AltitudeCertificate build(const Trace& trace, CertMode mode, std::optional<BandTable> bands) {
  if (!trace.tree) throw Error("trace has no tree");
  const SubdividedTree& t = *trace.tree;
  AltitudeCertificate cert;
  cert.mode = mode;
  cert.bands = std::move(bands);
  BandLimits lim;
  if (cert.bands) lim = limits_of(*cert.bands);

  const std::vector<StepRef> steps = flatten_steps(trace);
  Altitudes a(t.size(), cert.base);
  for (std::size_t idx = steps.size(); idx-- > 0;) {
    const SmallStep& st = trace.events[steps[idx].event].steps[steps[idx].step];
    CertEvent e;
    e.step = idx;
    e.top = t.root();
    std::optional<Move> down;
    for (const Move& m : st.moves) {
      if (st.down && m.server == *st.down) {
        down = m;
      } else {
        e.frontier.push_back(m.from);
      }
    }
    std::sort(e.frontier.begin(), e.frontier.end());
    e.frontier.erase(std::unique(e.frontier.begin(), e.frontier.end()), e.frontier.end());
    if (down) e.top = down->to;

    if (mode == CertMode::Monotone) {
      bool steep = std::any_of(e.frontier.begin(), e.frontier.end(),
                               [&](Vertex v) { return slope(t, a, v) == 1; });
      if (down && slope(t, a, down->to) == 0) steep = true;
      e.delta = steep ? 0 : 1;
    } else {
      std::optional<std::int64_t> best;
      auto take = [&](std::int64_t x) { best = best ? std::min(*best, x) : x; };
      for (Vertex v : e.frontier) take(lim.hi[t.long_depth(v)] - slope(t, a, v));
      if (down) take(slope(t, a, down->to) - lim.lo[t.long_depth(down->to)]);
      e.delta = best.value_or(0);
    }
    if (e.delta != 0) {
      for (Vertex u : event_component(t, e)) a[u] -= e.delta;
    }
    cert.reverse_events.push_back(std::move(e));
  }
  return cert;
}

void check_alignment(const AltitudeCertificate& cert, std::size_t steps) {
  if (cert.reverse_events.size() != steps) {
    throw Error("certificate has " + std::to_string(cert.reverse_events.size()) +
                " events but the trace has " + std::to_string(steps) + " small steps");
  }
  for (std::size_t i = 0; i < steps; ++i) {
    if (cert.reverse_events[i].step != steps - 1 - i) throw Error("certificate events out of order");
  }
}

// Server positions before every small step, in forward order.
std::vector<Configuration> positions_before_steps(const Trace& trace) {
  std::vector<Configuration> out;
  Configuration c = trace.initial;
  for (const auto& ev : trace.events) {
    for (const auto& st : ev.steps) {
      out.push_back(c);
      for (const Move& m : st.moves) c[m.server] = m.to;
    }
    if (ev.relocation) c[ev.relocation->server] = ev.relocation->to;
  }
  return out;
}

std::vector<Configuration> configurations_at_requests(const Trace& trace) {
  std::vector<Configuration> out{trace.initial};
  Configuration c = trace.initial;
  for (const auto& ev : trace.events) {
    for (const auto& st : ev.steps)
      for (const Move& m : st.moves) c[m.server] = m.to;
    if (ev.relocation) c[ev.relocation->server] = ev.relocation->to;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<StepRef> flatten_steps(const Trace& trace) {
  std::vector<StepRef> out;
  for (std::size_t e = 0; e < trace.events.size(); ++e)
    for (std::size_t s = 0; s < trace.events[e].steps.size(); ++s) out.push_back({e, s});
  return out;
}

AltitudeCertificate build_certificate_hst(const Trace& trace) {
  return build(trace, CertMode::Monotone, std::nullopt);
}

AltitudeCertificate build_certificate_weighted(const Trace& trace, int d) {
  if (!trace.tree) throw Error("trace has no tree");
  if (trace.tree->base().combinatorial_height() > d) {
    throw Error("tree depth " + std::to_string(trace.tree->base().combinatorial_height()) +
                " exceeds the band depth " + std::to_string(d));
  }
  const int k = std::max<int>(2, static_cast<int>(trace.initial.size()));
  return build(trace, CertMode::Banded, bands(k, std::max(d, 1)));
}

std::vector<Vertex> event_component(const SubdividedTree& t, const CertEvent& e) {
  const WeightedTree& u = t.unit();
  std::vector<bool> cut(u.size(), false);
  for (Vertex f : e.frontier) {
    if (f == e.top || !u.is_ancestor(e.top, f)) throw Error("event frontier outside its component");
    cut[f] = true;
  }
  std::vector<Vertex> out, stack{e.top};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (Vertex c : u.children(v))
      if (!cut[c]) stack.push_back(c);
  }
  return out;
}

void replay_altitudes(const AltitudeCertificate& cert, const SubdividedTree& t, const AltitudeVisitor& visit) {
  Altitudes after(t.size(), cert.base);
  for (const CertEvent& e : cert.reverse_events) {
    Altitudes before = after;
    if (e.delta != 0) {
      for (Vertex u : event_component(t, e)) before[u] -= e.delta;
    }
    visit(e.step, before, after);
    after = std::move(before);
  }
}

std::vector<std::vector<std::int64_t>> altitudes_at_requests(const AltitudeCertificate& cert,
                                                             const Trace& trace) {
  const std::vector<StepRef> steps = flatten_steps(trace);
  check_alignment(cert, steps.size());
  const SubdividedTree& t = *trace.tree;
  const std::size_t T = trace.events.size();
  std::vector<Altitudes> rows(T + 1);
  rows[T].assign(t.size(), cert.base);
  std::size_t next = 0;
  for (std::size_t r = T; r > 0; --r) {
    Altitudes a = rows[r];
    for (std::size_t s = 0; s < trace.events[r - 1].steps.size(); ++s) {
      const CertEvent& e = cert.reverse_events[next++];
      if (e.delta != 0)
        for (Vertex u : event_component(t, e)) a[u] -= e.delta;
    }
    rows[r - 1] = std::move(a);
  }
  return rows;
}

DualEvaluation evaluate_dual(const AltitudeCertificate& cert, const Trace& trace) {
  const std::vector<StepRef> steps = flatten_steps(trace);
  check_alignment(cert, steps.size());
  const std::vector<Configuration> pos = positions_before_steps(trace);
  DualEvaluation out;
  out.step_delta.assign(steps.size(), 0);
  replay_altitudes(cert, *trace.tree, [&](std::size_t s, const Altitudes& before, const Altitudes& after) {
    const RequestEvent& ev = trace.events[steps[s].event];
    Configuration next = pos[s];
    for (const Move& m : ev.steps[steps[s].step].moves) next[m.server] = m.to;
    std::int64_t d = after[ev.request.s] - before[ev.request.s];
    for (std::size_t i = 0; i < next.size(); ++i) d -= after[next[i]] - before[pos[s][i]];
    out.step_delta[s] = d;
  });

  const auto rows = altitudes_at_requests(cert, trace);
  const auto configs = configurations_at_requests(trace);
  out.per_request.assign(trace.events.size(), 0);
  std::size_t s = 0;
  for (std::size_t r = 0; r < trace.events.size(); ++r) {
    if (trace.events[r].request.is_simple()) {
      for (std::size_t k = 0; k < trace.events[r].steps.size(); ++k) out.per_request[r] += out.step_delta[s++];
    } else {
      for (Vertex v : configs[r + 1]) out.per_request[r] -= rows[r + 1][v] - rows[r][v];
    }
    out.total += out.per_request[r];
  }
  return out;
}

FeasibilityReport verify_feasibility(const AltitudeCertificate& cert, const SubdividedTree& t) {
  FeasibilityReport rep;
  BandLimits lim;
  if (cert.mode == CertMode::Banded) {
    if (!cert.bands) {
      rep.clean = false;
      rep.first_violation = "banded certificate without a band table";
      return rep;
    }
    lim = limits_of(*cert.bands);
  }
  const BigInt scale = cert.scale();
  auto fail = [&](std::size_t step, std::string msg) {
    if (rep.clean) {
      rep.clean = false;
      rep.first_violation = std::move(msg);
      rep.step = step;
    }
  };
  auto check_slopes = [&](std::size_t step, const Altitudes& a) {
    for (Vertex u = 0; u < t.size(); ++u) {
      if (u == t.root()) continue;
      const std::int64_t s = slope(t, a, u);
      if (cert.mode == CertMode::Monotone) {
        if (s != 0 && s != 1) fail(step, "slope " + std::to_string(s) + " at vertex " + std::to_string(u));
      } else {
        const int d = t.long_depth(u);
        if (d >= static_cast<int>(lim.lo.size()) || s < lim.lo[d] || s > lim.hi[d]) {
          fail(step, "slope " + std::to_string(s) + " outside its band at vertex " + std::to_string(u));
        }
      }
      if (BigInt(s < 0 ? -s : s) > scale) rep.scaled_feasible = false;
    }
  };
  check_slopes(0, Altitudes(t.size(), cert.base));
  std::size_t expected = cert.reverse_events.size();
  try {
    replay_altitudes(cert, t, [&](std::size_t step, const Altitudes& before, const Altitudes& after) {
      if (step + 1 != expected) fail(step, "certificate events out of order");
      expected = step;
      for (Vertex u = 0; u < t.size(); ++u) {
        if (before[u] > after[u]) fail(step, "altitude decreases over time at vertex " + std::to_string(u));
      }
      check_slopes(step, before);
    });
  } catch (const Error& e) {
    fail(0, e.what());
  }
  return rep;
}

GuaranteeReport check_guarantees(const AltitudeCertificate& cert, const Trace& trace,
                                 const DualEvaluation& eval) {
  GuaranteeReport rep;
  auto fail = [&](std::string msg) {
    if (rep.clean) {
      rep.clean = false;
      rep.first_violation = std::move(msg);
    }
  };
  const std::vector<StepRef> steps = flatten_steps(trace);
  if (eval.step_delta.size() != steps.size() || eval.per_request.size() != trace.events.size()) {
    fail("evaluation does not match the trace");
    return rep;
  }
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const SmallStep& st = trace.events[steps[s].event].steps[steps[s].step];
    const std::int64_t u = static_cast<std::int64_t>(st.up.size());
    const std::int64_t b = st.down ? 1 : 0;
    const std::int64_t d = eval.step_delta[s];
    ++rep.steps_checked;
    if (cert.mode == CertMode::Monotone) {
      if (b == 0 && d < 1) fail("step " + std::to_string(s) + " with empty B has Delta D " + std::to_string(d));
      if (b == 1 && d < 0) fail("step " + std::to_string(s) + " with singleton B has Delta D " + std::to_string(d));
    } else if (u + b > d) {
      fail("step " + std::to_string(s) + " moves " + std::to_string(u + b) + " servers but Delta D is " +
           std::to_string(d));
    }
  }
  for (std::size_t r = 0; r < trace.events.size(); ++r) {
    if (trace.events[r].request.is_simple()) continue;
    ++rep.relocations_checked;
    if (eval.per_request[r] != 0) fail("relocation " + std::to_string(r) + " has non-zero D_t");
  }
  return rep;
}

LambdaB transform_to_lambda_b(const AltitudeCertificate& cert, const Trace& trace) {
  const SubdividedTree& t = *trace.tree;
  const Vertex root = t.root();
  const auto rows = altitudes_at_requests(cert, trace);
  const auto configs = configurations_at_requests(trace);
  const std::size_t T = trace.events.size();
  const int n = t.size();
  const std::int64_t k = static_cast<std::int64_t>(trace.initial.size());

  LambdaB out;
  out.lambda.assign(T + 1, std::vector<std::int64_t>(n, 0));
  out.b.assign(T + 1, std::vector<std::int64_t>(n, 0));
  out.xi.assign(T + 1, {});
  for (std::size_t r = 0; r <= T; ++r) {
    for (Vertex u = 0; u < n; ++u) {
      if (r > 0) out.lambda[r][u] = rows[r][u] - rows[r - 1][u];
      if (u != root) out.b[r][u] = rows[r][u] - rows[r][t.parent(u)];
    }
  }
  for (std::size_t r = 1; r <= T; ++r) {
    for (Vertex u = 0; u < n; ++u) {
      if (out.lambda[r][u] < 0) throw Error("lambda is negative at vertex " + std::to_string(u));
      if (u == root) continue;
      if (out.lambda[r][u] - out.lambda[r][t.parent(u)] != out.b[r][u] - out.b[r - 1][u]) {
        throw Error("original dual constraint fails at vertex " + std::to_string(u) + ", time " +
                    std::to_string(r));
      }
    }
  }

  auto subtree_counts = [&](const Configuration& c) {
    std::vector<std::int64_t> x(n, 0);
    for (Vertex v : c) {
      for (Vertex w = v;; w = t.parent(w)) {
        ++x[w];
        if (w == root) break;
      }
    }
    return x;
  };

  std::int64_t obj = 0;
  for (std::size_t r = 1; r <= T; ++r) {
    const Request& q = trace.events[r - 1].request;
    obj -= k * out.lambda[r][root];
    if (q.is_simple()) {
      obj += out.lambda[r][q.s];
    } else {
      out.xi[r].assign(n, 0);
      for (Vertex u = 0; u < n; ++u) {
        if (u == root) continue;
        const bool s_in = t.is_ancestor(u, q.s), d_in = t.is_ancestor(u, q.d);
        out.xi[r][u] = (!s_in && d_in) ? 1 : (s_in && !d_in) ? -1 : 0;
        obj += out.xi[r][u] * out.b[r - 1][u];
      }
    }
  }
  const auto x0 = subtree_counts(configs.front()), xT = subtree_counts(configs.back());
  for (Vertex u = 0; u < n; ++u) {
    if (u != root) obj += x0[u] * out.b[0][u] - xT[u] * out.b[T][u];
  }
  out.objective = obj;
  const std::int64_t d = evaluate_dual(cert, trace).total;
  if (obj != d) {
    throw Error("original dual objective " + std::to_string(obj) + " differs from D = " + std::to_string(d));
  }
  return out;
}

WeakDualityReport weak_duality_check(const DualEvaluation& eval, std::int64_t opt_fixed, const BigInt& scale) {
  WeakDualityReport rep;
  rep.dual = eval.total;
  rep.opt = opt_fixed;
  rep.scale = scale;
  rep.holds = BigInt(eval.total) <= scale * opt_fixed;
  return rep;
}

}  // namespace ktaxi
