#include "ktaxi/potentials.hpp"

#include <algorithm>

#include "ktaxi/assignment.hpp"

namespace ktaxi {

HstLayerHeights layer_heights(const WeightedTree& hst) {
  if (!hst.uniform_leaf_depth() || !hst.uniform_combinatorial_leaf_depth()) {
    throw Error("layer heights need uniform leaf depth");
  }
  HstLayerHeights out{{0}};
  for (Vertex v = hst.leaves().front(); v != hst.root(); v = hst.parent(v)) {
    out.alpha.push_back(out.alpha.back() + hst.weight(v));
  }
  return out;
}

std::int64_t psi_kserver(const SubdividedTree& t, const Configuration& cfg) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.size(); ++j) sum += t.depth(t.lca(cfg[i], cfg[j]));
  return -sum;
}

std::int64_t psi_ktaxi_hst(const SubdividedTree& hst, const HstLayerHeights& layers, const Configuration& cfg) {
  std::vector<std::int64_t> h;
  for (Vertex v : cfg) h.push_back(hst.weighted_height(v));
  std::sort(h.begin(), h.end());
  const int d = layers.depth();
  std::int64_t psi = 0;
  for (int i = 0; i < static_cast<int>(h.size()); ++i) {
    for (int l = 1; l < d; ++l) {  // c_{i,0} = 0
      const std::int64_t term = std::max(layers.alpha[l], std::min(h[i], layers.alpha[l + 1]));
      psi += to_int64(c_kd(i, l)) * term;
    }
  }
  return psi;
}

PotentialReport check_step_inequalities(const Trace& trace, PotentialKind kind, std::int64_t c) {
  if (!trace.tree) throw Error("trace has no tree");
  const SubdividedTree& t = *trace.tree;
  HstLayerHeights layers;
  if (kind == PotentialKind::KTaxiHst) layers = layer_heights(t.base());
  auto psi = [&](const Configuration& cfg) {
    return kind == PotentialKind::KServer ? psi_kserver(t, cfg) : psi_ktaxi_hst(t, layers, cfg);
  };
  PotentialReport rep;
  auto fail = [&](std::string msg) {
    if (rep.clean) {
      rep.clean = false;
      rep.first_violation = std::move(msg);
    }
  };
  Configuration cfg = trace.initial;
  std::int64_t cur = psi(cfg);
  rep.psi_initial = cur;
  for (std::size_t e = 0; e < trace.events.size(); ++e) {
    const RequestEvent& ev = trace.events[e];
    for (std::size_t s = 0; s < ev.steps.size(); ++s) {
      const SmallStep& st = ev.steps[s];
      for (const Move& m : st.moves) cfg[m.server] = m.to;
      const std::int64_t next = psi(cfg);
      const std::int64_t lhs = static_cast<std::int64_t>(st.up.size()) + next - cur;
      ++rep.steps_checked;
      const std::string where = "request " + std::to_string(e) + " step " + std::to_string(s);
      if (st.down) {
        if (lhs > 0) fail(where + ": |U| + dPsi = " + std::to_string(lhs) + " > 0");
      } else {
        rep.worst_free_step = std::max(rep.worst_free_step, lhs);
        if (lhs > c) fail(where + ": |U| + dPsi = " + std::to_string(lhs) + " > " + std::to_string(c));
      }
      cur = next;
    }
    if (ev.relocation) {
      cfg[ev.relocation->server] = ev.relocation->to;
      const std::int64_t next = psi(cfg);
      if (kind == PotentialKind::KTaxiHst) {
        ++rep.relocations_checked;
        if (next != cur) fail("relocation " + std::to_string(e) + " changes the potential");
      }
      cur = next;
    }
  }
  rep.psi_final = cur;
  return rep;
}

std::int64_t matching_potential(const WeightedTree& t, const Configuration& online, const Configuration& offline) {
  if (online.size() != offline.size()) throw Error("matching needs configurations of equal size");
  CostMatrix m(online.size(), std::vector<std::int64_t>(offline.size()));
  for (std::size_t i = 0; i < online.size(); ++i)
    for (std::size_t j = 0; j < offline.size(); ++j) m[i][j] = t.distance(online[i], offline[j]);
  return online.size() <= 6 ? exhaustive_assignment(m).cost : min_cost_assignment(m).cost;
}

std::int64_t pairwise_spread(const WeightedTree& t, const Configuration& cfg) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.size(); ++j) sum += t.distance(cfg[i], cfg[j]);
  return sum;
}

}  // namespace ktaxi
