#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "crunch/provisioner.hpp"

namespace crunch {

/// One of the compared admission approaches. The capacity override models
/// the what-if network that simply has more installed capacity.
struct ApproachPolicy {
  enum class Kind { kBaseline, kLpOnly, kSpGreedy, kProvisioner };

  std::string name;
  Kind kind = Kind::kBaseline;
  int k = 1;
  std::optional<double> capacity_override_gbps;
  FreeWeightPolicy free_weight = FreeWeightPolicy::kMeanRate;

  /// Accepted spellings: "baseline", "baseline-<gbps>", "lp-k<k>",
  /// "sp-k<k>", "provisioner-k<k>".
  static ApproachPolicy parse(const std::string& name) {
    ApproachPolicy p;
    p.name = name;
    auto k_after = [&](const std::string& prefix) {
      return std::stoi(name.substr(prefix.size()));
    };
    if (name == "baseline") {
      p.kind = Kind::kBaseline;
    } else if (name.rfind("baseline-", 0) == 0) {
      p.kind = Kind::kBaseline;
      p.capacity_override_gbps = std::stod(name.substr(9));
    } else if (name.rfind("lp-k", 0) == 0) {
      p.kind = Kind::kLpOnly;
      p.k = k_after("lp-k");
    } else if (name.rfind("sp-k", 0) == 0) {
      p.kind = Kind::kSpGreedy;
      p.k = k_after("sp-k");
    } else if (name.rfind("provisioner-k", 0) == 0) {
      p.kind = Kind::kProvisioner;
      p.k = k_after("provisioner-k");
    } else {
      throw std::invalid_argument("unknown policy: " + name);
    }
    if (p.k < 1) throw std::invalid_argument("policy k must be >= 1");
    return p;
  }
};

/// Blocking-only approach: a crunched request always pays its penalty.
inline DecisionRecord baseline_decide(const Request& request) {
  DecisionRecord rec;
  rec.request_id = request.id;
  rec.outcome = DecisionRecord::Outcome::kBlocked;
  rec.blocking_cost_paid = request.blocking_cost;
  return rec;
}

/// Cheapest per-link greedy degradation along one fixed path: connections
/// are shed in ascending cost-per-Gbps order on each link until the target
/// fits, with multi-link connections charged once. nullopt when even full
/// degradation cannot free the target on some link.
inline std::optional<CandidateSet> greedy_path_degradation(const NetworkState& state,
                                                           const Path& path,
                                                           Bandwidth target,
                                                           bool at_requested,
                                                           double horizon_s) {
  std::map<ConnId, Bandwidth> shed;
  for (LinkId l : path.links) {
    Bandwidth available = state.free_capacity(l);
    for (ConnId id : state.connections_on(l)) {
      auto it = shed.find(id);
      if (it != shed.end()) available += it->second;
    }
    if (available >= target) continue;
    Bandwidth need = target - available;

    std::vector<std::pair<double, ConnId>> order;
    for (ConnId id : state.connections_on(l)) {
      const Connection& c = state.connection(id);
      if (c.degradable().positive()) order.emplace_back(c.rate_per_gbps, id);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [rate, id] : order) {
      const Connection& c = state.connection(id);
      Bandwidth already = shed.count(id) ? shed[id] : Bandwidth::zero();
      Bandwidth extra = min(need, c.degradable() - already);
      if (!extra.positive()) continue;
      shed[id] = already + extra;
      need -= extra;
      if (!need.positive()) break;
    }
    if (need.positive()) return std::nullopt;
  }

  CandidateSet set;
  set.target = target;
  set.at_requested = at_requested;
  set.quality = CandidateQuality::kCandidate;
  set.physical_hint = path;
  for (const auto& [id, amount] : shed) {
    if (!amount.positive()) continue;
    set.members.push_back({id, amount});
    set.cost += state.connection(id).rate_per_gbps * amount.gbps() * horizon_s;
  }
  return set;
}

/// LP-only approach: step II alone, then the profitability gate.
inline DecisionRecord lp_only_decide(NetworkState& state, DegradedRegistry& registry,
                                     const Request& request, int k,
                                     const PricingContext& ctx,
                                     const std::vector<Path>* paths = nullptr) {
  auto best = lp_provisioner(state, request, k, std::nullopt, ctx.mean_holding_s, paths);
  if (!best) return detail::blocked_record(request, std::nullopt);
  if (!profitable(request, *best, ctx)) return detail::blocked_record(request, best);
  ExecutionResult exec = execute(state, registry, request, *best);
  return detail::served_record(request, *best, exec, ctx);
}

/// Greedy approach: walks the k shortest paths and commits to the first one
/// that can free enough capacity, serving or blocking on that path alone.
inline DecisionRecord sp_greedy_decide(NetworkState& state, DegradedRegistry& registry,
                                       const Request& request, int k,
                                       const PricingContext& ctx,
                                       const std::vector<Path>* paths = nullptr) {
  std::vector<Path> owned;
  if (!paths) {
    owned = k_shortest_paths(state.topology(), request.src, request.dst, k);
    paths = &owned;
  }
  int used = 0;
  for (const Path& p : *paths) {
    if (used++ >= k) break;
    auto set_min = greedy_path_degradation(state, p, request.b_min, false, ctx.mean_holding_s);
    if (!set_min) continue;  // this path cannot free enough; try the next
    std::optional<CandidateSet> chosen = set_min;
    if (request.b_req > request.b_min) {
      auto set_req = greedy_path_degradation(state, p, request.b_req, true, ctx.mean_holding_s);
      if (set_req && set_req->cost_per_gbps() < set_min->cost_per_gbps()) chosen = set_req;
    } else {
      chosen->at_requested = true;
      chosen->target = request.b_req;
    }
    if (!profitable(request, *chosen, ctx)) {
      return detail::blocked_record(request, chosen);
    }
    ExecutionResult exec = execute(state, registry, request, *chosen);
    return detail::served_record(request, *chosen, exec, ctx);
  }
  return detail::blocked_record(request, std::nullopt);
}

/// Diagnostic: the path a cost-weighted shortest-path search would pick
/// (each link weighed by the cheapest way to free the target on it,
/// connections charged per link), plus that path's charge-once cost.
struct WeightedPathDiagnostic {
  Path path;
  double link_weight_sum = 0.0;
  double charge_once_cost = 0.0;
  CandidateSet set;
};

inline std::optional<WeightedPathDiagnostic> degradation_weighted_path(
    const NetworkState& state, NodeId s, NodeId t, Bandwidth target, double horizon_s) {
  const Topology& topo = state.topology();
  constexpr double kInf = 1e30;

  auto link_weight = [&](LinkId l) -> double {
    Bandwidth free = state.free_capacity(l);
    if (free >= target) return 0.0;
    Bandwidth need = target - free;
    std::vector<std::pair<double, ConnId>> order;
    for (ConnId id : state.connections_on(l)) {
      const Connection& c = state.connection(id);
      if (c.degradable().positive()) order.emplace_back(c.rate_per_gbps, id);
    }
    std::sort(order.begin(), order.end());
    double cost = 0.0;
    for (const auto& [rate, id] : order) {
      Bandwidth take = min(need, state.connection(id).degradable());
      cost += rate * take.gbps() * horizon_s;
      need -= take;
      if (!need.positive()) return cost;
    }
    return kInf;
  };

  struct Label {
    double cost;
    std::vector<NodeId> seq;
    bool operator>(const Label& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (seq.size() != o.seq.size()) return seq.size() > o.seq.size();
      return seq > o.seq;
    }
  };
  std::priority_queue<Label, std::vector<Label>, std::greater<Label>> heap;
  std::vector<char> settled(static_cast<size_t>(topo.node_count()), 0);
  heap.push({0.0, {s}});
  while (!heap.empty()) {
    Label cur = heap.top();
    heap.pop();
    NodeId u = cur.seq.back();
    if (settled[static_cast<size_t>(u)]) continue;
    settled[static_cast<size_t>(u)] = 1;
    if (u == t) {
      WeightedPathDiagnostic diag;
      diag.path = make_path(topo, cur.seq);
      diag.link_weight_sum = cur.cost;
      auto set = greedy_path_degradation(state, diag.path, target, false, horizon_s);
      if (!set) return std::nullopt;
      diag.charge_once_cost = set->cost;
      diag.set = *set;
      return diag;
    }
    for (auto [nb, l] : topo.neighbors(u)) {
      if (settled[static_cast<size_t>(nb)]) continue;
      double w = link_weight(l);
      if (w >= kInf) continue;
      Label next{cur.cost + w, cur.seq};
      next.seq.push_back(nb);
      heap.push(std::move(next));
    }
  }
  return std::nullopt;
}

/// Per-replication bundle: one approach, its CAG (when it uses one) and its
/// cached shortest-path lists.
class PolicyRuntime {
 public:
  PolicyRuntime(ApproachPolicy cfg, PricingContext ctx)
      : cfg_(std::move(cfg)), ctx_(ctx) {}

  const ApproachPolicy& config() const { return cfg_; }

  void attach(NetworkState& state) {
    state_ = &state;
    if (cfg_.kind == ApproachPolicy::Kind::kProvisioner) {
      cag_ = std::make_unique<Cag>(state, cfg_.free_weight, ctx_.mean_holding_s);
    }
  }

  Cag* cag() { return cag_.get(); }

  /// Forward network-state events here to keep the CAG current.
  void on_event(const StateEvent& e) {
    if (cag_) cag_->apply_event(e);
  }

  DecisionRecord decide_crunched(DegradedRegistry& registry, const Request& request) {
    NetworkState& state = *state_;
    switch (cfg_.kind) {
      case ApproachPolicy::Kind::kBaseline:
        return baseline_decide(request);
      case ApproachPolicy::Kind::kLpOnly:
        return lp_only_decide(state, registry, request, cfg_.k, ctx_,
                              &paths_for(request.src, request.dst));
      case ApproachPolicy::Kind::kSpGreedy:
        return sp_greedy_decide(state, registry, request, cfg_.k, ctx_,
                                &paths_for(request.src, request.dst));
      case ApproachPolicy::Kind::kProvisioner:
        return provision(state, *cag_, registry, request, ctx_, cfg_.k, true,
                         &paths_for(request.src, request.dst));
    }
    return baseline_decide(request);
  }

 private:
  const std::vector<Path>& paths_for(NodeId s, NodeId t) {
    auto key = std::make_pair(s, t);
    auto it = path_cache_.find(key);
    if (it == path_cache_.end()) {
      it = path_cache_.emplace(key, k_shortest_paths(state_->topology(), s, t, cfg_.k)).first;
    }
    return it->second;
  }

  ApproachPolicy cfg_;
  PricingContext ctx_;
  NetworkState* state_ = nullptr;
  std::unique_ptr<Cag> cag_;
  std::map<std::pair<NodeId, NodeId>, std::vector<Path>> path_cache_;
};

}  // namespace crunch
