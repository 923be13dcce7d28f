#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "crunch/lp.hpp"
#include "crunch/network_state.hpp"
#include "support/test_graphs.hpp"

namespace crunch::testsupport {

/// Path enumeration order used by the routing oracle: hop count ascending,
/// then node sequence descending lexicographically. Written out here,
/// independent of the library's comparator.
inline bool oracle_path_before(const Path& a, const Path& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return std::lexicographical_compare(b.nodes.begin(), b.nodes.end(), a.nodes.begin(),
                                      a.nodes.end());
}

inline std::vector<Path> oracle_sorted_paths(const Topology& topo, NodeId s, NodeId t) {
  std::vector<Path> all = enumerate_simple_paths(topo, s, t);
  std::sort(all.begin(), all.end(), oracle_path_before);
  return all;
}

/// Exhaustive optimum degradation cost for states where each link carries
/// at most one degradable connection: every simple s-t path is checked, and
/// on each path every congested link is served by its (unique) degradable
/// connection, which must shed the largest per-link deficit it covers.
/// Returns nullopt when no path can be freed at all.
inline std::optional<double> optimum_degradation_cost(const NetworkState& state,
                                                      NodeId s, NodeId t, Bandwidth b,
                                                      double horizon_s) {
  std::optional<double> best;
  for (const Path& q : enumerate_simple_paths(state.topology(), s, t)) {
    std::map<ConnId, Bandwidth> need;
    bool feasible = true;
    for (LinkId l : q.links) {
      Bandwidth free = state.free_capacity(l);
      if (free >= b) continue;
      Bandwidth deficit = b - free;
      ConnId degradable_conn = 0;
      int count = 0;
      for (ConnId id : state.connections_on(l)) {
        if (state.connection(id).degradable().positive()) {
          degradable_conn = id;
          ++count;
        }
      }
      if (count > 1) throw std::logic_error("oracle requires <=1 degradable per link");
      if (count == 0 || state.connection(degradable_conn).degradable() < deficit) {
        feasible = false;
        break;
      }
      Bandwidth& cur = need[degradable_conn];
      cur = max(cur, deficit);
    }
    if (!feasible) continue;
    double cost = 0.0;
    for (const auto& [id, amount] : need) {
      cost += state.connection(id).rate_per_gbps * amount.gbps() * horizon_s;
    }
    if (!best || cost < *best) best = cost;
  }
  return best;
}

/// Brute-force minimum of a degradation program on a bandwidth grid.
/// Returns nullopt when no grid point satisfies the link budgets.
inline std::optional<double> grid_lp_minimum(const LpInstance& inst, double step_gbps) {
  std::vector<size_t> steps;
  std::vector<const LpInstance::Entry*> vars;
  for (const auto& c : inst.connections) {
    vars.push_back(&c);
    // One extra step so the y = b_min endpoint is always evaluated (the
    // clamp below folds any overshoot back onto the bound).
    steps.push_back(static_cast<size_t>(
        std::floor(c.degradable().gbps() / step_gbps + 1e-9)) + 2);
  }
  const size_t rows = inst.links.size();
  std::vector<double> budget(rows);
  for (size_t j = 0; j < rows; ++j) budget[j] = (inst.capacities[j] - inst.b_c).gbps();

  std::vector<size_t> idx(vars.size(), 0);
  std::optional<double> best;
  while (true) {
    double cost = 0.0;
    std::vector<double> usage(rows, 0.0);
    for (size_t i = 0; i < vars.size(); ++i) {
      double y = vars[i]->b_cur.gbps() - static_cast<double>(idx[i]) * step_gbps;
      if (y < vars[i]->b_min.gbps() - 1e-9) y = vars[i]->b_min.gbps();
      cost += vars[i]->rate_per_gbps * (vars[i]->b_cur.gbps() - y);
      for (int j : vars[i]->rows) usage[static_cast<size_t>(j)] += y;
    }
    bool ok = true;
    for (size_t j = 0; j < rows; ++j) {
      if (usage[j] > budget[j] + 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok && (!best || cost < *best)) best = cost;

    size_t d = 0;
    while (d < idx.size() && ++idx[d] >= steps[d]) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  if (best) *best *= inst.horizon_s;
  return best;
}

}  // namespace crunch::testsupport
