#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crunch/network_state.hpp"
#include "crunch/pricing.hpp"

namespace crunch {

/// Weight assigned to free-link dummy vertices during path search. Their
/// true degradation cost is always zero; a nonzero heuristic weight keeps
/// searched paths short.
enum class FreeWeightPolicy { kZero, kMeanRate };

struct CagVertexKey {
  enum class Kind { kConnection = 0, kFreeLink = 1 };
  Kind kind = Kind::kConnection;
  std::uint64_t id = 0;  // ConnId or LinkId

  static CagVertexKey for_connection(ConnId c) { return {Kind::kConnection, c}; }
  static CagVertexKey for_link(LinkId l) {
    return {Kind::kFreeLink, static_cast<std::uint64_t>(l)};
  }

  bool is_connection() const { return kind == Kind::kConnection; }
  friend auto operator<=>(const CagVertexKey&, const CagVertexKey&) = default;
};

struct CagVertex {
  CagVertexKey key;
  std::vector<NodeId> node_set;  // sorted physical nodes of the represented path
  std::vector<LinkId> links;     // the connection's links, or the one free link

  bool operator==(const CagVertex&) const = default;
};

/// A query view over the CAG: relaxed admits every vertex, capacitated only
/// those able to provide the full bandwidth (free capacity plus degradable
/// amount at least B).
struct CagView {
  bool capacitated = false;
  Bandwidth bandwidth;

  static CagView relaxed(Bandwidth b) { return {false, b}; }
  static CagView capacitated_at(Bandwidth b) { return {true, b}; }
};

struct CagPath {
  std::vector<CagVertexKey> vertices;  // terminals excluded
  double weighted_cost = 0.0;          // under the free-weight policy
  double true_cost = 0.0;              // dummies cost nothing
};

/// Connection Adjacency Graph: one vertex per degradable live connection
/// and per link with spare capacity, edges joining vertices whose paths
/// share a physical node. The graph is maintained incrementally from
/// NetworkState events; source/destination terminals are overlaid per
/// query. A min-cost terminal-to-terminal path proposes a degradation set.
///
/// Vertices live in reusable slots so queries can run over flat arrays;
/// every neighbor list is kept sorted by vertex key to make results
/// independent of allocation history.
class Cag {
 public:
  Cag(const NetworkState& state, FreeWeightPolicy policy, double horizon_s)
      : state_(&state), policy_(policy), horizon_s_(horizon_s) {
    rebuild();
  }

  FreeWeightPolicy policy() const { return policy_; }
  void set_policy(FreeWeightPolicy p) { policy_ = p; }

  /// Full reconstruction from the current network state.
  void rebuild() {
    slots_.clear();
    adjacency_.clear();
    free_slots_.clear();
    slot_of_.clear();
    by_node_.assign(static_cast<size_t>(state_->topology().node_count()), {});
    slot_stamp_.clear();
    stamp_ = 0;
    for (const auto& [id, c] : state_->connections()) reconcile_connection(id);
    for (LinkId l = 0; l < state_->topology().link_count(); ++l) reconcile_dummy(l);
  }

  /// Incremental maintenance; the result is identical to rebuild() on the
  /// post-event state.
  void apply_event(const StateEvent& e) {
    switch (e.kind) {
      case StateEvent::Kind::kConnectionAdded: {
        reconcile_connection(e.conn);
        for (LinkId l : state_->connection(e.conn).path.links) reconcile_dummy(l);
        break;
      }
      case StateEvent::Kind::kConnectionRemoved: {
        auto it = slot_of_.find(CagVertexKey::for_connection(e.conn));
        if (it != slot_of_.end()) remove_slot(it->second);
        for (LinkId l : e.links) reconcile_dummy(l);
        break;
      }
      case StateEvent::Kind::kBandwidthChanged:
        // The per-link kFreeCapacityChanged events that follow cover the
        // reconciliation.
        break;
      case StateEvent::Kind::kFreeCapacityChanged: {
        reconcile_dummy(e.link);
        // Degradable status of connections on this link may have flipped
        // (a throttle to b_min or an upgrade away from it).
        for (ConnId id : state_->connections_on(e.link)) reconcile_connection(id);
        break;
      }
    }
  }

  size_t vertex_count() const { return slot_of_.size(); }

  bool has_vertex(const CagVertexKey& k) const { return slot_of_.count(k) != 0; }

  const CagVertex& vertex(const CagVertexKey& k) const {
    return *slots_[static_cast<size_t>(slot_of_.at(k))];
  }

  std::vector<CagVertexKey> neighbors(const CagVertexKey& k) const {
    std::vector<CagVertexKey> out;
    auto it = slot_of_.find(k);
    if (it == slot_of_.end()) return out;
    for (int nb : adjacency_[static_cast<size_t>(it->second)]) {
      out.push_back(slots_[static_cast<size_t>(nb)]->key);
    }
    return out;
  }

  bool structurally_equal(const Cag& other) const {
    if (slot_of_.size() != other.slot_of_.size()) return false;
    for (const auto& [key, slot] : slot_of_) {
      auto oit = other.slot_of_.find(key);
      if (oit == other.slot_of_.end()) return false;
      if (*slots_[static_cast<size_t>(slot)] !=
          *other.slots_[static_cast<size_t>(oit->second)]) {
        return false;
      }
      if (neighbors(key) != other.neighbors(key)) return false;
    }
    return true;
  }

  Bandwidth degradable_of(const CagVertexKey& k) const {
    if (k.is_connection()) return state_->connection(k.id).degradable();
    return state_->free_capacity(static_cast<LinkId>(k.id));
  }

  /// Minimum free capacity among the represented connection's links. A
  /// dummy vertex is itself the spare capacity, so its f_min is zero.
  Bandwidth f_min_of(const CagVertexKey& k) const {
    if (!k.is_connection()) return Bandwidth::zero();
    const auto& c = state_->connection(k.id);
    Bandwidth f = state_->free_capacity(c.path.links.front());
    for (LinkId l : c.path.links) f = min(f, state_->free_capacity(l));
    return f;
  }

  /// Bandwidth the vertex can provide on its links: spare capacity plus
  /// what throttling can shed.
  Bandwidth provideable_of(const CagVertexKey& k) const {
    return f_min_of(k) + degradable_of(k);
  }

  /// Weight of any edge pointing at vertex k in a view with bandwidth B:
  /// the revenue lost by shedding min(B, degradable) from the connection,
  /// over the pricing horizon. Dummies weigh per the free-weight policy.
  double vertex_weight(const CagVertexKey& k, Bandwidth b, double mean_rate) const {
    Bandwidth shed = min(b, degradable_of(k));
    if (k.is_connection()) {
      return state_->connection(k.id).rate_per_gbps * shed.gbps() * horizon_s_;
    }
    if (policy_ == FreeWeightPolicy::kZero) return 0.0;
    return mean_rate * shed.gbps() * horizon_s_;
  }

  /// True degradation cost contributed by vertex k when freeing B: only
  /// what spare capacity cannot cover is shed, dummies cost nothing.
  double vertex_true_cost(const CagVertexKey& k, Bandwidth b) const {
    if (!k.is_connection()) return 0.0;
    return state_->connection(k.id).rate_per_gbps * vertex_shed(k, b).gbps() * horizon_s_;
  }

  /// Throttle amount assigned to a real vertex of a capacitated-view path.
  Bandwidth vertex_shed(const CagVertexKey& k, Bandwidth b) const {
    return min(max(b - f_min_of(k), Bandwidth::zero()), degradable_of(k));
  }

  /// Min-cost Source->Destination path under the view. Ties resolve to
  /// fewer vertices, then to the lexicographically smallest vertex-key
  /// sequence.
  std::optional<CagPath> min_cost_path(NodeId s, NodeId t, const CagView& view) const {
    if (s == t) throw std::invalid_argument("source equals destination");
    if (!view.bandwidth.positive()) throw std::invalid_argument("bandwidth must be positive");
    if (s < 0 || t < 0 || static_cast<size_t>(s) >= by_node_.size() ||
        static_cast<size_t>(t) >= by_node_.size()) {
      throw std::invalid_argument("unknown terminal node");
    }

    const double mean_rate = policy_ == FreeWeightPolicy::kMeanRate ? mean_free_rate() : 0.0;
    const Bandwidth b = view.bandwidth;
    const size_t n = slots_.size();

    // Per-query caches so the search itself touches flat arrays only.
    scratch_weight_.assign(n, 0.0);
    scratch_admit_.assign(n, 0);
    scratch_cost_.assign(n, 0.0);
    scratch_hops_.assign(n, 0);
    scratch_parent_.assign(n, -2);  // -2 = unreached, -1 = source terminal
    for (size_t i = 0; i < n; ++i) {
      if (!slots_[i]) continue;
      const CagVertexKey& key = slots_[i]->key;
      bool ok = !view.capacitated || provideable_of(key) >= b;
      scratch_admit_[i] = ok ? 1 : 0;
      if (ok) scratch_weight_[i] = vertex_weight(key, b, mean_rate);
    }

    struct HeapItem {
      double cost;
      int hops;
      int slot;
      bool operator>(const HeapItem& o) const {
        if (cost != o.cost) return cost > o.cost;
        if (hops != o.hops) return hops > o.hops;
        return slot_key_greater(*this, o);
      }
      // Placeholder comparison on slot index; real sequence tie-breaks are
      // applied when labels are improved, so heap order among exact ties
      // only needs to be deterministic.
      static bool slot_key_greater(const HeapItem& a, const HeapItem& o) {
        return a.slot > o.slot;
      }
    };
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;
    std::vector<char> settled(n, 0);

    auto chain_of = [&](int slot, int extra_parent) {
      std::vector<CagVertexKey> seq;
      int cur = slot;
      if (extra_parent != -3) {
        seq.push_back(slots_[static_cast<size_t>(slot)]->key);
        cur = extra_parent;
      }
      while (cur >= 0) {
        seq.push_back(slots_[static_cast<size_t>(cur)]->key);
        cur = scratch_parent_[static_cast<size_t>(cur)];
      }
      std::reverse(seq.begin(), seq.end());
      return seq;
    };

    // Improves the label of `slot` with a candidate path ending there.
    auto improve = [&](int slot, double cost, int hops, int parent) {
      size_t i = static_cast<size_t>(slot);
      if (scratch_parent_[i] == -2 || cost < scratch_cost_[i] ||
          (cost == scratch_cost_[i] &&
           (hops < scratch_hops_[i] ||
            (hops == scratch_hops_[i] &&
             chain_of(slot, parent) < chain_of(slot, -3))))) {
        scratch_cost_[i] = cost;
        scratch_hops_[i] = hops;
        scratch_parent_[i] = parent;
        heap.push({cost, hops, slot});
        return true;
      }
      return false;
    };

    for (int slot : by_node_[static_cast<size_t>(s)]) {
      if (!scratch_admit_[static_cast<size_t>(slot)]) continue;
      improve(slot, scratch_weight_[static_cast<size_t>(slot)], 1, -1);
    }

    // Pops arrive in (cost, hops) order; among terminal-reaching vertices
    // with exactly equal labels the lexicographically smallest vertex
    // sequence wins, independent of slot allocation history.
    bool have_best = false;
    double best_cost = 0.0;
    int best_hops = 0;
    std::vector<CagVertexKey> best_seq;

    while (!heap.empty()) {
      HeapItem top = heap.top();
      heap.pop();
      size_t v = static_cast<size_t>(top.slot);
      if (settled[v] || top.cost != scratch_cost_[v] || top.hops != scratch_hops_[v]) {
        continue;
      }
      if (have_best &&
          (top.cost > best_cost || (top.cost == best_cost && top.hops > best_hops))) {
        break;
      }
      settled[v] = 1;
      const CagVertex& vert = *slots_[v];
      if (std::binary_search(vert.node_set.begin(), vert.node_set.end(), t)) {
        std::vector<CagVertexKey> seq = chain_of(top.slot, -3);
        if (!have_best || seq < best_seq) {
          have_best = true;
          best_cost = top.cost;
          best_hops = top.hops;
          best_seq = std::move(seq);
        }
        continue;
      }
      for (int nb : adjacency_[v]) {
        size_t w = static_cast<size_t>(nb);
        if (settled[w] || !scratch_admit_[w]) continue;
        improve(nb, top.cost + scratch_weight_[w], top.hops + 1, top.slot);
      }
    }
    if (!have_best) return std::nullopt;
    CagPath out;
    out.vertices = std::move(best_seq);
    out.weighted_cost = best_cost;
    for (const auto& k : out.vertices) out.true_cost += vertex_true_cost(k, b);
    return out;
  }

  /// Mean of the cheapest and the most expensive per-Gbps revenue rates
  /// among live degradable connections; steers dummy weights under the
  /// mean-rate policy.
  double mean_free_rate() const {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& [id, c] : state_->connections()) {
      if (!c.degradable().positive()) continue;
      if (!any) {
        lo = hi = c.rate_per_gbps;
        any = true;
      } else {
        lo = std::min(lo, c.rate_per_gbps);
        hi = std::max(hi, c.rate_per_gbps);
      }
    }
    return any ? (lo + hi) / 2.0 : 0.0;
  }

  std::string vertex_name(const CagVertexKey& k) const {
    if (k.is_connection()) return "c" + std::to_string(k.id);
    const Link& l = state_->topology().link(static_cast<LinkId>(k.id));
    return "free(" + state_->topology().node_name(l.a) + "," +
           state_->topology().node_name(l.b) + ")";
  }

  /// DOT export of the query-overlaid graph for one view.
  std::string to_dot(NodeId s, NodeId t, const CagView& view) const {
    const double mean_rate = policy_ == FreeWeightPolicy::kMeanRate ? mean_free_rate() : 0.0;
    const Bandwidth b = view.bandwidth;
    auto admitted = [&](const CagVertexKey& k) {
      return !view.capacitated || provideable_of(k) >= b;
    };
    auto contains = [&](const CagVertexKey& k, NodeId n) {
      const auto& ns = vertex(k).node_set;
      return std::binary_search(ns.begin(), ns.end(), n);
    };
    std::ostringstream os;
    os << "digraph cag {\n";
    os << "  source [shape=box];\n  destination [shape=box];\n";
    for (const auto& [k, slot] : slot_of_) {
      if (!admitted(k)) continue;
      os << "  \"" << vertex_name(k) << "\" [label=\"" << vertex_name(k) << " {";
      const auto& ns = vertex(k).node_set;
      for (size_t i = 0; i < ns.size(); ++i) {
        if (i) os << ",";
        os << state_->topology().node_name(ns[i]);
      }
      os << "}\"];\n";
    }
    for (const auto& [k, slot] : slot_of_) {
      if (!admitted(k)) continue;
      if (contains(k, s)) {
        os << "  source -> \"" << vertex_name(k) << "\" [label=\""
           << vertex_weight(k, b, mean_rate) << "\"];\n";
      }
      for (const CagVertexKey& nb : neighbors(k)) {
        if (!admitted(nb)) continue;
        os << "  \"" << vertex_name(k) << "\" -> \"" << vertex_name(nb) << "\" [label=\""
           << vertex_weight(nb, b, mean_rate) << "\"];\n";
      }
      if (contains(k, t)) {
        os << "  \"" << vertex_name(k) << "\" -> destination [label=\"0\"];\n";
      }
    }
    os << "}\n";
    return os.str();
  }

 private:
  void reconcile_connection(ConnId id) {
    auto key = CagVertexKey::for_connection(id);
    bool should_exist = state_->has_connection(id) &&
                        state_->connection(id).degradable().positive();
    auto it = slot_of_.find(key);
    if (should_exist && it == slot_of_.end()) {
      const Connection& c = state_->connection(id);
      add_vertex(CagVertex{key, c.sorted_nodes(), c.path.links});
    } else if (!should_exist && it != slot_of_.end()) {
      remove_slot(it->second);
    }
  }

  void reconcile_dummy(LinkId l) {
    auto key = CagVertexKey::for_link(l);
    bool should_exist = state_->free_capacity(l).positive();
    auto it = slot_of_.find(key);
    if (should_exist && it == slot_of_.end()) {
      const Link& lk = state_->topology().link(l);
      add_vertex(CagVertex{key, {std::min(lk.a, lk.b), std::max(lk.a, lk.b)}, {l}});
    } else if (!should_exist && it != slot_of_.end()) {
      remove_slot(it->second);
    }
  }

  void add_vertex(CagVertex v) {
    int slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
      slots_[static_cast<size_t>(slot)] = v;
      adjacency_[static_cast<size_t>(slot)].clear();
    } else {
      slot = static_cast<int>(slots_.size());
      slots_.push_back(v);
      adjacency_.emplace_back();
    }
    slot_of_.emplace(v.key, slot);

    // Gather distinct vertices sharing a physical node.
    ++stamp_;
    if (slot_stamp_.size() < slots_.size()) slot_stamp_.resize(slots_.size(), 0);
    std::vector<int> nbs;
    for (NodeId n : v.node_set) {
      for (int other : by_node_[static_cast<size_t>(n)]) {
        if (slot_stamp_[static_cast<size_t>(other)] == stamp_) continue;
        slot_stamp_[static_cast<size_t>(other)] = stamp_;
        nbs.push_back(other);
      }
    }
    for (NodeId n : v.node_set) by_node_[static_cast<size_t>(n)].push_back(slot);

    auto key_less = [this](int a, int bslot) {
      return slots_[static_cast<size_t>(a)]->key < slots_[static_cast<size_t>(bslot)]->key;
    };
    auto& mine = adjacency_[static_cast<size_t>(slot)];
    mine = nbs;
    std::sort(mine.begin(), mine.end(), key_less);
    for (int other : nbs) {
      auto& theirs = adjacency_[static_cast<size_t>(other)];
      theirs.insert(std::lower_bound(theirs.begin(), theirs.end(), slot, key_less), slot);
    }
  }

  void remove_slot(int slot) {
    const CagVertex& v = *slots_[static_cast<size_t>(slot)];
    for (NodeId n : v.node_set) {
      auto& lst = by_node_[static_cast<size_t>(n)];
      lst.erase(std::find(lst.begin(), lst.end(), slot));
    }
    for (int other : adjacency_[static_cast<size_t>(slot)]) {
      auto& theirs = adjacency_[static_cast<size_t>(other)];
      theirs.erase(std::find(theirs.begin(), theirs.end(), slot));
    }
    adjacency_[static_cast<size_t>(slot)].clear();
    slot_of_.erase(v.key);
    slots_[static_cast<size_t>(slot)].reset();
    free_slots_.push_back(slot);
  }

  const NetworkState* state_;
  FreeWeightPolicy policy_;
  double horizon_s_;

  std::vector<std::optional<CagVertex>> slots_;
  std::vector<std::vector<int>> adjacency_;  // per slot, sorted by neighbor key
  std::vector<int> free_slots_;
  std::map<CagVertexKey, int> slot_of_;
  std::vector<std::vector<int>> by_node_;

  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> slot_stamp_;

  // Query scratch, reused across calls.
  mutable std::vector<double> scratch_weight_;
  mutable std::vector<char> scratch_admit_;
  mutable std::vector<double> scratch_cost_;
  mutable std::vector<int> scratch_hops_;
  mutable std::vector<int> scratch_parent_;
};

}  // namespace crunch
