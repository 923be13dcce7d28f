#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "crunch/candidate.hpp"
#include "crunch/network_state.hpp"
#include "crunch/routing.hpp"
#include "crunch/simplex.hpp"

namespace crunch {

/// Per-path degradation program: choose new bandwidths y_i for every
/// connection crossing the path so that each path link keeps b_c spare,
/// minimizing the revenue the reductions forgo.
struct LpInstance {
  struct Entry {
    ConnId id = 0;
    Bandwidth b_min;
    Bandwidth b_cur;
    double rate_per_gbps = 0.0;
    std::vector<int> rows;  // indices into `links` this connection crosses

    Bandwidth degradable() const { return b_cur - b_min; }
  };

  Path path;
  std::vector<LinkId> links;
  std::vector<Bandwidth> capacities;
  std::vector<Entry> connections;
  Bandwidth b_c;
  double horizon_s = 1.0;
};

struct LpSolution {
  struct NewBandwidth {
    ConnId id = 0;
    double y_gbps = 0.0;
  };
  std::vector<NewBandwidth> bandwidths;
  /// Lost revenue over the horizon, $: sum r_i(B_i) - sum r_i(y_i).
  double objective = 0.0;
};

inline LpInstance build_instance(const NetworkState& state, const Path& path,
                                 Bandwidth b_c, double horizon_s) {
  if (!b_c.positive()) throw std::invalid_argument("target bandwidth must be positive");
  LpInstance inst;
  inst.path = path;
  inst.b_c = b_c;
  inst.horizon_s = horizon_s;
  inst.links = path.links;
  std::map<ConnId, size_t> index;
  for (size_t row = 0; row < inst.links.size(); ++row) {
    LinkId l = inst.links[row];
    inst.capacities.push_back(state.topology().link(l).capacity);
    for (ConnId id : state.connections_on(l)) {
      auto [it, fresh] = index.try_emplace(id, inst.connections.size());
      if (fresh) {
        const Connection& c = state.connection(id);
        inst.connections.push_back(
            LpInstance::Entry{id, c.b_min, c.b_cur, c.rate_per_gbps, {}});
      }
      inst.connections[it->second].rows.push_back(static_cast<int>(row));
    }
  }
  return inst;
}

/// Exact optimum of the instance, or nullopt when infeasible (some link
/// cannot spare b_c even with every crossing connection at its minimum).
/// Numerical trouble surfaces as an exception, never as "infeasible".
inline std::optional<LpSolution> solve(const LpInstance& inst) {
  const size_t rows = inst.links.size();

  // Feasibility is separable per link; check it exactly in integer
  // bandwidth units before any floating-point work.
  std::vector<std::int64_t> budget_milli(rows);
  for (size_t j = 0; j < rows; ++j) {
    budget_milli[j] = (inst.capacities[j] - inst.b_c).milli();
  }
  for (const auto& c : inst.connections) {
    for (int j : c.rows) budget_milli[static_cast<size_t>(j)] -= c.b_min.milli();
  }
  for (size_t j = 0; j < rows; ++j) {
    if (budget_milli[j] < 0) return std::nullopt;
  }

  // Degenerate b_min == b_cur entries cannot move; they are pre-fixed at
  // their bound and only consume budget (already subtracted above, since
  // budgets are relative to everyone sitting at b_min).
  std::vector<size_t> free_vars;
  for (size_t i = 0; i < inst.connections.size(); ++i) {
    if (inst.connections[i].b_cur > inst.connections[i].b_min) free_vars.push_back(i);
  }

  // Variables x_i = y_i - b_min_i in [0, degradable_i]; maximize sum r_i x_i
  // subject to per-link budgets and the upper bounds (as extra rows).
  const size_t n = free_vars.size();
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (size_t j = 0; j < rows; ++j) {
    std::vector<double> row(n, 0.0);
    bool any = false;
    for (size_t k = 0; k < n; ++k) {
      const auto& c = inst.connections[free_vars[k]];
      for (int r : c.rows) {
        if (static_cast<size_t>(r) == j) {
          row[k] = 1.0;
          any = true;
        }
      }
    }
    if (any) {
      a.push_back(std::move(row));
      b.push_back(static_cast<double>(budget_milli[j]) / 1000.0);
    }
  }
  std::vector<double> c_obj(n);
  for (size_t k = 0; k < n; ++k) {
    const auto& c = inst.connections[free_vars[k]];
    std::vector<double> bound_row(n, 0.0);
    bound_row[k] = 1.0;
    a.push_back(std::move(bound_row));
    b.push_back(c.degradable().gbps());
    c_obj[k] = c.rate_per_gbps;
  }

  SimplexSolution s = simplex_maximize(a, b, c_obj);

  LpSolution sol;
  double shed_value = 0.0;
  std::vector<double> y(inst.connections.size());
  for (size_t i = 0; i < inst.connections.size(); ++i) y[i] = inst.connections[i].b_min.gbps();
  for (size_t k = 0; k < n; ++k) {
    const auto& c = inst.connections[free_vars[k]];
    double x = std::min(std::max(s.x[k], 0.0), c.degradable().gbps());
    y[free_vars[k]] = c.b_min.gbps() + x;
    shed_value += c.rate_per_gbps * (c.degradable().gbps() - x);
  }
  for (size_t i = 0; i < inst.connections.size(); ++i) {
    sol.bandwidths.push_back({inst.connections[i].id, y[i]});
  }
  sol.objective = shed_value * inst.horizon_s;

  // Residual check: every link row must hold within 1e-9.
  std::vector<double> usage(rows, 0.0);
  for (size_t i = 0; i < inst.connections.size(); ++i) {
    for (int j : inst.connections[i].rows) usage[static_cast<size_t>(j)] += y[i];
  }
  for (size_t j = 0; j < rows; ++j) {
    double limit = (inst.capacities[j] - inst.b_c).gbps();
    if (usage[j] > limit + 1e-9) {
      throw std::runtime_error("lp residual check failed on row " + std::to_string(j));
    }
  }
  return sol;
}

/// Turns an LP solution into an executable candidate set: sheds are rounded
/// up to the bandwidth grid (never past a connection's minimum), which can
/// only free more capacity than the continuous optimum did.
inline CandidateSet candidate_from_lp(const NetworkState& state, const LpInstance& inst,
                                      const LpSolution& sol, bool at_requested) {
  CandidateSet set;
  set.target = inst.b_c;
  set.at_requested = at_requested;
  set.quality = CandidateQuality::kCandidate;
  set.physical_hint = inst.path;
  double cost = 0.0;
  for (const auto& nb : sol.bandwidths) {
    const Connection& c = state.connection(nb.id);
    double shed_gbps = c.b_cur.gbps() - nb.y_gbps;
    if (shed_gbps <= 1e-12) continue;
    Bandwidth shed = min(ceil_to_grid(shed_gbps), c.degradable());
    if (!shed.positive()) continue;
    set.members.push_back({nb.id, shed});
    cost += c.rate_per_gbps * shed.gbps() * inst.horizon_s;
  }
  set.cost = cost;
  return set;
}

/// Selection rule across (path, bandwidth) pairs: lowest cost per Gbps
/// wins; on an exact ratio tie the minimum-bandwidth set is kept, and
/// earlier (shorter) paths beat later ones.
inline bool lp_candidate_improves(const CandidateSet& incumbent, const CandidateSet& challenger) {
  double a = incumbent.cost_per_gbps();
  double b = challenger.cost_per_gbps();
  if (b != a) return b < a;
  return incumbent.at_requested && !challenger.at_requested;
}

/// Step II: runs the degradation program over the k shortest paths, once
/// per target bandwidth, keeps the best by the normalized-cost rule, and
/// returns it unless the prior candidate is at least as cheap.
inline std::optional<CandidateSet> lp_provisioner(
    const NetworkState& state, const Request& request, int k,
    const std::optional<CandidateSet>& prior, double horizon_s,
    const std::vector<Path>* precomputed_paths = nullptr) {
  std::vector<Path> owned;
  const std::vector<Path>* paths = precomputed_paths;
  if (!paths) {
    owned = k_shortest_paths(state.topology(), request.src, request.dst, k);
    paths = &owned;
  }

  std::optional<CandidateSet> best;
  int used = 0;
  for (const Path& p : *paths) {
    if (used++ >= k) break;
    for (bool at_req : {true, false}) {
      Bandwidth target = at_req ? request.b_req : request.b_min;
      if (!at_req && request.b_min == request.b_req) continue;
      LpInstance inst = build_instance(state, p, target, horizon_s);
      auto sol = solve(inst);
      if (!sol) continue;
      CandidateSet cand = candidate_from_lp(state, inst, *sol, at_req);
      if (!best || lp_candidate_improves(*best, cand)) best = std::move(cand);
    }
  }

  if (!best) return prior;
  if (prior && prior->cost_per_gbps() <= best->cost_per_gbps()) return prior;
  return best;
}

}  // namespace crunch
