#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crunch/cag.hpp"
#include "crunch/network_state.hpp"
#include "crunch/pricing.hpp"

namespace crunch {

struct CandidateMember {
  ConnId id = 0;
  Bandwidth shed;

  friend bool operator==(const CandidateMember&, const CandidateMember&) = default;
};

enum class CandidateQuality { kGood, kCandidate };

/// A candidate degradation set: connections to throttle (with amounts) so
/// that the crunched request fits at `target`. cost is the revenue the
/// throttles forgo over the decision horizon; free-link dummies never
/// appear here since shedding them costs nothing.
struct CandidateSet {
  std::vector<CandidateMember> members;
  Bandwidth target;
  bool at_requested = false;
  double cost = 0.0;
  CandidateQuality quality = CandidateQuality::kCandidate;
  std::vector<CagVertexKey> cag_path;   // set when CAG-derived
  std::optional<Path> physical_hint;    // set when derived from a physical path

  double cost_per_gbps() const { return cost / target.gbps(); }
};

struct DecisionRecord {
  enum class Outcome { kServedAtReq, kServedAtMin, kBlocked };

  ConnId request_id = 0;
  Outcome outcome = Outcome::kBlocked;
  std::vector<CandidateMember> degraded;
  std::optional<Path> allocated_path;
  /// Decision-time revenue of the served bandwidth over the horizon ($).
  double decision_revenue = 0.0;
  /// Cost of the executed set, or of the cheapest set found when blocking.
  double degradation_cost = 0.0;
  double blocking_cost_paid = 0.0;

  bool served() const { return outcome != Outcome::kBlocked; }

  static const char* outcome_name(Outcome o) {
    switch (o) {
      case Outcome::kServedAtReq: return "served-at-req";
      case Outcome::kServedAtMin: return "served-at-min";
      default: return "blocked";
    }
  }

  nlohmann::json to_json(const Topology& topo) const {
    nlohmann::json degraded_json = nlohmann::json::array();
    for (const auto& m : degraded) {
      degraded_json.push_back({{"connection", m.id}, {"shed_gbps", m.shed.gbps()}});
    }
    nlohmann::json j{{"request", request_id},
                     {"outcome", outcome_name(outcome)},
                     {"degraded", degraded_json},
                     {"decision_revenue_usd", decision_revenue},
                     {"degradation_cost_usd", degradation_cost},
                     {"blocking_cost_usd", blocking_cost_paid}};
    if (allocated_path) {
      nlohmann::json nodes = nlohmann::json::array();
      for (NodeId n : allocated_path->nodes) nodes.push_back(topo.node_name(n));
      j["path"] = nodes;
    }
    return j;
  }
};

/// Priority list of throttled connections (and crunched requests serving
/// below their requested bandwidth) awaiting re-upgrade as capacity frees.
/// Scan order: revenue rate per Gbps descending, then fewer allocated hops,
/// then id.
class DegradedRegistry {
 public:
  struct Entry {
    double rate_per_gbps = 0.0;
    int hops = 0;
    ConnId id = 0;

    bool operator<(const Entry& o) const {
      if (rate_per_gbps != o.rate_per_gbps) return rate_per_gbps > o.rate_per_gbps;
      if (hops != o.hops) return hops < o.hops;
      return id < o.id;
    }
  };

  void add(const Connection& c) {
    if (ids_.insert(c.id).second) {
      entries_.insert(Entry{c.rate_per_gbps, c.path.hops(), c.id});
    }
  }

  void remove(ConnId id) {
    if (!ids_.erase(id)) return;
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->id == id) {
        entries_.erase(it);
        return;
      }
    }
  }

  bool contains(ConnId id) const { return ids_.count(id) != 0; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<ConnId> ordered() const {
    std::vector<ConnId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
  }

 private:
  std::set<Entry> entries_;
  std::set<ConnId> ids_;
};

}  // namespace crunch
