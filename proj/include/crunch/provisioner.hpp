#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "crunch/cag.hpp"
#include "crunch/candidate.hpp"
#include "crunch/lp.hpp"
#include "crunch/network_state.hpp"
#include "crunch/pricing.hpp"
#include "crunch/routing.hpp"

namespace crunch {

enum class CagDecisionKind { kBlock, kGood, kCandidate, kNone };

struct CagDecision {
  CagDecisionKind kind = CagDecisionKind::kNone;
  std::optional<CandidateSet> set;
};

namespace detail {

inline CandidateSet candidate_from_cag_path(const Cag& cag, const CagPath& path,
                                            Bandwidth target, bool at_requested,
                                            CandidateQuality quality) {
  CandidateSet set;
  set.target = target;
  set.at_requested = at_requested;
  set.quality = quality;
  set.cag_path = path.vertices;
  set.cost = path.true_cost;
  for (const CagVertexKey& k : path.vertices) {
    if (!k.is_connection()) continue;
    Bandwidth shed = cag.vertex_shed(k, target);
    if (shed.positive()) set.members.push_back({k.id, shed});
  }
  return set;
}

}  // namespace detail

/// Step I: min-cost path search over the CAG views. Returns Block when even
/// the relaxed graph has no terminal-to-terminal path (no degradation can
/// help), a Good set when the capacitated cost meets the relaxed lower
/// bound, a plain Candidate otherwise, and None when only the relaxed
/// searches succeed.
inline CagDecision cag_provisioner(const Cag& cag, const Request& request) {
  const NodeId s = request.src;
  const NodeId t = request.dst;
  const Bandwidth b_min = request.b_min;
  const Bandwidth b_req = request.b_req;

  auto relaxed_min = cag.min_cost_path(s, t, CagView::relaxed(b_min));
  if (!relaxed_min) return {CagDecisionKind::kBlock, std::nullopt};
  auto relaxed_req = cag.min_cost_path(s, t, CagView::relaxed(b_req));

  auto cap_min = cag.min_cost_path(s, t, CagView::capacitated_at(b_min));
  auto cap_req = cag.min_cost_path(s, t, CagView::capacitated_at(b_req));
  if (!cap_min && !cap_req) return {CagDecisionKind::kNone, std::nullopt};

  // Pick the bandwidth branch by normalized true cost; a tie goes to the
  // requested bandwidth (more served traffic at the same unit cost).
  bool use_req;
  if (cap_min && cap_req) {
    use_req = cap_req->true_cost / b_req.gbps() <= cap_min->true_cost / b_min.gbps();
  } else {
    use_req = cap_req.has_value();
  }

  const CagPath& chosen = use_req ? *cap_req : *cap_min;
  const std::optional<CagPath>& relaxed = use_req ? relaxed_req : relaxed_min;
  bool good = relaxed && std::abs(chosen.weighted_cost - relaxed->weighted_cost) <= 1e-9;

  CandidateSet set = detail::candidate_from_cag_path(
      cag, chosen, use_req ? b_req : b_min, use_req,
      good ? CandidateQuality::kGood : CandidateQuality::kCandidate);
  return {good ? CagDecisionKind::kGood : CagDecisionKind::kCandidate, std::move(set)};
}

/// revenue(target) + avoided blocking penalty must cover the degradation
/// cost.
inline bool profitable(const Request& request, const CandidateSet& set,
                       const PricingContext& ctx) {
  double gain = ctx.decision_revenue(request, set.target) + request.blocking_cost;
  return gain + 1e-9 >= set.cost;
}

struct ExecutionResult {
  Path allocated_path;
  std::vector<CandidateMember> executed;  // post-re-upgrade net sheds
};

/// Step III: throttles the set, allocates the request on the capacitated
/// shortest path that opened up, then hands back whatever slack the
/// realized path leaves to the just-throttled members (registry order,
/// never past their pre-throttle bandwidth). Members still below their
/// requested bandwidth enter the registry, as does the new connection if
/// served below b_req. A failed path search rolls every throttle back.
inline ExecutionResult execute(NetworkState& state, DegradedRegistry& registry,
                               const Request& request, const CandidateSet& set) {
  struct Throttled {
    ConnId id;
    Bandwidth before;
  };
  std::vector<Throttled> undo;
  undo.reserve(set.members.size());

  for (const CandidateMember& m : set.members) {
    const Connection& c = state.connection(m.id);
    Bandwidth shed = min(m.shed, c.degradable());
    if (!shed.positive()) continue;
    Bandwidth before = c.b_cur;
    state.throttle(m.id, before - shed);
    undo.push_back({m.id, before});
  }

  auto path = capacitated_shortest_path(state, request.src, request.dst, set.target);
  if (!path) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      state.upgrade(it->id, it->before);
    }
    throw std::logic_error("degradation set did not open a path for request " +
                           std::to_string(request.id));
  }

  state.allocate(connection_from_request(request, *path, set.target));

  // Re-upgrade pass over the just-throttled members, most valuable first.
  std::vector<DegradedRegistry::Entry> order;
  for (const Throttled& th : undo) {
    const Connection& c = state.connection(th.id);
    order.push_back({c.rate_per_gbps, c.path.hops(), th.id});
  }
  std::sort(order.begin(), order.end());
  std::map<ConnId, Bandwidth> before_by_id;
  for (const Throttled& th : undo) before_by_id[th.id] = th.before;
  for (const auto& e : order) {
    const Connection& c = state.connection(e.id);
    Bandwidth slack = state.free_capacity(c.path.links.front());
    for (LinkId l : c.path.links) slack = min(slack, state.free_capacity(l));
    Bandwidth restored = min(before_by_id[e.id], c.b_cur + slack);
    if (restored > c.b_cur) state.upgrade(e.id, restored);
  }

  ExecutionResult result;
  result.allocated_path = *path;
  for (const Throttled& th : undo) {
    const Connection& c = state.connection(th.id);
    if (th.before > c.b_cur) result.executed.push_back({th.id, th.before - c.b_cur});
    if (c.b_cur < c.b_req) {
      registry.add(c);
    } else {
      registry.remove(c.id);
    }
  }
  const Connection& served = state.connection(request.id);
  if (served.b_cur < served.b_req) registry.add(served);
  return result;
}

/// Departure hook: walks the registry in priority order and lifts each
/// entry as far as the current slack on its path allows, dropping entries
/// that reach their requested bandwidth.
inline void on_departure(NetworkState& state, DegradedRegistry& registry) {
  for (ConnId id : registry.ordered()) {
    if (!state.has_connection(id)) {
      registry.remove(id);
      continue;
    }
    const Connection& c = state.connection(id);
    Bandwidth slack = state.free_capacity(c.path.links.front());
    for (LinkId l : c.path.links) slack = min(slack, state.free_capacity(l));
    Bandwidth new_bw = min(c.b_req, c.b_cur + slack);
    if (new_bw > c.b_cur) state.upgrade(id, new_bw);
    if (state.connection(id).b_cur == c.b_req) registry.remove(id);
  }
}

namespace detail {

inline DecisionRecord blocked_record(const Request& request,
                                     const std::optional<CandidateSet>& best) {
  DecisionRecord rec;
  rec.request_id = request.id;
  rec.outcome = DecisionRecord::Outcome::kBlocked;
  rec.blocking_cost_paid = request.blocking_cost;
  if (best) {
    rec.degradation_cost = best->cost;
    rec.degraded = best->members;
  }
  return rec;
}

inline DecisionRecord served_record(const Request& request, const CandidateSet& set,
                                    const ExecutionResult& exec,
                                    const PricingContext& ctx) {
  DecisionRecord rec;
  rec.request_id = request.id;
  rec.outcome = set.target == request.b_req ? DecisionRecord::Outcome::kServedAtReq
                                            : DecisionRecord::Outcome::kServedAtMin;
  rec.degraded = exec.executed;
  rec.allocated_path = exec.allocated_path;
  rec.decision_revenue = ctx.decision_revenue(request, set.target);
  rec.degradation_cost = set.cost;
  return rec;
}

}  // namespace detail

/// The full pipeline for one crunched request: CAG search, then (for linear
/// revenue models) the per-path program as fallback, profitability, and
/// execution or blocking.
inline DecisionRecord provision(NetworkState& state, Cag& cag, DegradedRegistry& registry,
                                const Request& request, const PricingContext& ctx, int k,
                                bool linear_revenues = true,
                                const std::vector<Path>* precomputed_paths = nullptr) {
  CagDecision d = cag_provisioner(cag, request);

  switch (d.kind) {
    case CagDecisionKind::kBlock:
      return detail::blocked_record(request, std::nullopt);
    case CagDecisionKind::kGood: {
      if (!profitable(request, *d.set, ctx)) {
        return detail::blocked_record(request, d.set);
      }
      ExecutionResult exec = execute(state, registry, request, *d.set);
      return detail::served_record(request, *d.set, exec, ctx);
    }
    case CagDecisionKind::kCandidate:
    case CagDecisionKind::kNone: {
      std::optional<CandidateSet> chosen = d.set;
      if (linear_revenues) {
        chosen = lp_provisioner(state, request, k, d.set, ctx.mean_holding_s,
                                precomputed_paths);
      }
      if (!chosen) return detail::blocked_record(request, std::nullopt);
      if (!profitable(request, *chosen, ctx)) {
        return detail::blocked_record(request, chosen);
      }
      ExecutionResult exec = execute(state, registry, request, *chosen);
      return detail::served_record(request, *chosen, exec, ctx);
    }
  }
  return detail::blocked_record(request, std::nullopt);
}

}  // namespace crunch
