#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crunch/topology.hpp"
#include "crunch/units.hpp"

namespace crunch {

using ConnId = std::uint64_t;

enum class ServiceClassId { kInteractive = 0, kElastic = 1, kBackground = 2, kCustom = 3 };

inline const char* service_class_name(ServiceClassId c) {
  switch (c) {
    case ServiceClassId::kInteractive: return "interactive";
    case ServiceClassId::kElastic: return "elastic";
    case ServiceClassId::kBackground: return "background";
    default: return "custom";
  }
}

/// A live connection. Bandwidth may move within [b_min, b_req]; the amount
/// b_cur - b_min is what throttling can still shed.
struct Connection {
  ConnId id = 0;
  NodeId src = -1;
  NodeId dst = -1;
  Path path;
  Bandwidth b_req;
  Bandwidth b_min;
  Bandwidth b_cur;
  ServiceClassId service_class = ServiceClassId::kCustom;
  /// Revenue rate per Gbps per second; the class multiplier and the
  /// sqrt(shortest-path hops) pricing factor are folded in at creation.
  double rate_per_gbps = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;  // scheduled departure; decision logic must not read it

  Bandwidth degradable() const { return b_cur - b_min; }
  /// Instantaneous revenue rate in $/s at bandwidth bw.
  double revenue_rate(Bandwidth bw) const { return rate_per_gbps * bw.gbps(); }

  std::vector<NodeId> sorted_nodes() const {
    std::vector<NodeId> ns = path.nodes;
    std::sort(ns.begin(), ns.end());
    return ns;
  }
};

struct StateEvent {
  enum class Kind {
    kConnectionAdded,
    kConnectionRemoved,
    kBandwidthChanged,
    kFreeCapacityChanged,
  };
  Kind kind;
  ConnId conn = 0;              // connection events
  LinkId link = -1;             // kFreeCapacityChanged
  std::vector<LinkId> links;    // links of a removed connection
  Bandwidth old_bw;             // kBandwidthChanged
};

/// Mutable ground truth: the topology plus every live connection and the
/// per-link used capacity. Single writer; all mutations go through the
/// operations below, which keep the per-link usage sums exact and notify
/// the registered observer of structural changes.
class NetworkState {
 public:
  explicit NetworkState(Topology topology)
      : topology_(std::move(topology)),
        used_(static_cast<size_t>(topology_.link_count()), Bandwidth::zero()),
        by_link_(static_cast<size_t>(topology_.link_count())) {}

  const Topology& topology() const { return topology_; }

  Bandwidth used_capacity(LinkId l) const {
    check_link(l);
    return used_[static_cast<size_t>(l)];
  }

  Bandwidth free_capacity(LinkId l) const {
    check_link(l);
    return topology_.link(l).capacity - used_[static_cast<size_t>(l)];
  }

  bool has_connection(ConnId id) const { return connections_.count(id) != 0; }

  const Connection& connection(ConnId id) const {
    auto it = connections_.find(id);
    if (it == connections_.end()) {
      throw std::invalid_argument("unknown connection id " + std::to_string(id));
    }
    return it->second;
  }

  /// Live connections indexed by id (ordered, so iteration is deterministic).
  const std::map<ConnId, Connection>& connections() const { return connections_; }

  /// Ids of connections crossing link l, in allocation order.
  const std::vector<ConnId>& connections_on(LinkId l) const {
    check_link(l);
    return by_link_[static_cast<size_t>(l)];
  }

  void set_observer(std::function<void(const StateEvent&)> obs) {
    observer_ = std::move(obs);
  }

  void allocate(const Connection& conn) {
    if (conn.b_min > conn.b_cur || conn.b_cur > conn.b_req || !conn.b_min.positive()) {
      throw std::invalid_argument("connection bandwidth bounds violated");
    }
    if (connections_.count(conn.id)) {
      throw std::invalid_argument("connection id already live: " + std::to_string(conn.id));
    }
    for (LinkId l : conn.path.links) {
      if (free_capacity(l) < conn.b_cur) {
        throw std::runtime_error("insufficient capacity on link " + link_name(l) +
                                 ": free " + std::to_string(free_capacity(l).gbps()) +
                                 " Gbps < " + std::to_string(conn.b_cur.gbps()) + " Gbps");
      }
    }
    connections_.emplace(conn.id, conn);
    for (LinkId l : conn.path.links) {
      used_[static_cast<size_t>(l)] += conn.b_cur;
      by_link_[static_cast<size_t>(l)].push_back(conn.id);
    }
    notify({StateEvent::Kind::kConnectionAdded, conn.id, -1});
  }

  void throttle(ConnId id, Bandwidth new_bw) {
    Connection& c = mutable_connection(id);
    if (new_bw < c.b_min) {
      throw std::invalid_argument("throttle below minimum bandwidth (" +
                                  std::to_string(c.b_min.gbps()) + " Gbps) of connection " +
                                  std::to_string(id));
    }
    if (new_bw >= c.b_cur) {
      throw std::invalid_argument("throttle must reduce bandwidth of connection " +
                                  std::to_string(id));
    }
    Bandwidth delta = c.b_cur - new_bw;
    Bandwidth old_bw = c.b_cur;
    c.b_cur = new_bw;
    for (LinkId l : c.path.links) used_[static_cast<size_t>(l)] -= delta;
    notify_bandwidth_change(id, old_bw, c.path.links);
  }

  void upgrade(ConnId id, Bandwidth new_bw) {
    Connection& c = mutable_connection(id);
    if (new_bw <= c.b_cur) {
      throw std::invalid_argument("upgrade must increase bandwidth of connection " +
                                  std::to_string(id));
    }
    if (new_bw > c.b_req) {
      throw std::invalid_argument("upgrade above requested bandwidth (" +
                                  std::to_string(c.b_req.gbps()) + " Gbps) of connection " +
                                  std::to_string(id));
    }
    Bandwidth delta = new_bw - c.b_cur;
    for (LinkId l : c.path.links) {
      if (free_capacity(l) < delta) {
        throw std::runtime_error("insufficient capacity on link " + link_name(l) +
                                 " to upgrade connection " + std::to_string(id));
      }
    }
    Bandwidth old_bw = c.b_cur;
    c.b_cur = new_bw;
    for (LinkId l : c.path.links) used_[static_cast<size_t>(l)] += delta;
    notify_bandwidth_change(id, old_bw, c.path.links);
  }

  Connection release(ConnId id) {
    Connection c = connection(id);
    for (LinkId l : c.path.links) {
      used_[static_cast<size_t>(l)] -= c.b_cur;
      auto& v = by_link_[static_cast<size_t>(l)];
      v.erase(std::find(v.begin(), v.end(), id));
    }
    connections_.erase(id);
    notify({StateEvent::Kind::kConnectionRemoved, id, -1, c.path.links});
    return c;
  }

  /// Failure/maintenance hook: replaces one link's capacity. The new value
  /// must still cover current usage.
  void override_link_capacity(LinkId l, Bandwidth capacity) {
    check_link(l);
    if (capacity < used_[static_cast<size_t>(l)]) {
      throw std::runtime_error("capacity override below current usage on link " +
                               link_name(l));
    }
    topology_.set_link_capacity(l, capacity);
    notify({StateEvent::Kind::kFreeCapacityChanged, 0, l});
  }

  /// Recomputes per-link usage from scratch and checks it against the
  /// incrementally maintained values. Test support; throws on mismatch.
  void check_consistency() const {
    std::vector<Bandwidth> sums(static_cast<size_t>(topology_.link_count()),
                                Bandwidth::zero());
    for (const auto& [id, c] : connections_) {
      for (LinkId l : c.path.links) sums[static_cast<size_t>(l)] += c.b_cur;
    }
    for (LinkId l = 0; l < topology_.link_count(); ++l) {
      if (sums[static_cast<size_t>(l)] != used_[static_cast<size_t>(l)]) {
        throw std::logic_error("usage bookkeeping mismatch on link " + link_name(l));
      }
      if (used_[static_cast<size_t>(l)] > topology_.link(l).capacity) {
        throw std::logic_error("capacity exceeded on link " + link_name(l));
      }
    }
  }

  std::string link_name(LinkId l) const {
    const Link& lk = topology_.link(l);
    return topology_.node_name(lk.a) + "-" + topology_.node_name(lk.b);
  }

  nlohmann::json to_json() const {
    nlohmann::json conns = nlohmann::json::array();
    for (const auto& [id, c] : connections_) {
      nlohmann::json nodes = nlohmann::json::array();
      for (NodeId n : c.path.nodes) nodes.push_back(topology_.node_name(n));
      conns.push_back({{"id", id},
                       {"path", nodes},
                       {"b_req_gbps", c.b_req.gbps()},
                       {"b_min_gbps", c.b_min.gbps()},
                       {"b_cur_gbps", c.b_cur.gbps()},
                       {"service_class", service_class_name(c.service_class)},
                       {"rate_per_gbps", c.rate_per_gbps}});
    }
    return {{"topology", topology_.to_json()}, {"connections", conns}};
  }

  static NetworkState from_json(const nlohmann::json& j) {
    NetworkState state(Topology::from_json(j.at("topology")));
    for (const auto& jc : j.at("connections")) {
      Connection c;
      c.id = jc.at("id").get<ConnId>();
      std::vector<std::string> names = jc.at("path").get<std::vector<std::string>>();
      c.path = make_path_by_name(state.topology(), names);
      c.src = c.path.nodes.front();
      c.dst = c.path.nodes.back();
      c.b_req = Bandwidth::from_gbps(jc.at("b_req_gbps").get<double>());
      c.b_min = Bandwidth::from_gbps(jc.at("b_min_gbps").get<double>());
      c.b_cur = Bandwidth::from_gbps(jc.at("b_cur_gbps").get<double>());
      c.rate_per_gbps = jc.at("rate_per_gbps").get<double>();
      std::string cls = jc.value("service_class", "custom");
      c.service_class = cls == "interactive" ? ServiceClassId::kInteractive
                        : cls == "elastic"   ? ServiceClassId::kElastic
                        : cls == "background" ? ServiceClassId::kBackground
                                              : ServiceClassId::kCustom;
      state.allocate(c);
    }
    return state;
  }

  static NetworkState load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state snapshot: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

 private:
  Connection& mutable_connection(ConnId id) {
    auto it = connections_.find(id);
    if (it == connections_.end()) {
      throw std::invalid_argument("unknown connection id " + std::to_string(id));
    }
    return it->second;
  }

  void check_link(LinkId l) const {
    if (l < 0 || l >= topology_.link_count()) {
      throw std::invalid_argument("unknown link id " + std::to_string(l));
    }
  }

  void notify(const StateEvent& e) {
    if (observer_) observer_(e);
  }

  void notify_bandwidth_change(ConnId id, Bandwidth old_bw,
                               const std::vector<LinkId>& links) {
    if (!observer_) return;
    StateEvent change{StateEvent::Kind::kBandwidthChanged, id, -1, {}, old_bw};
    observer_(change);
    for (LinkId l : links) observer_({StateEvent::Kind::kFreeCapacityChanged, 0, l});
  }

  Topology topology_;
  std::vector<Bandwidth> used_;
  std::vector<std::vector<ConnId>> by_link_;
  std::map<ConnId, Connection> connections_;
  std::function<void(const StateEvent&)> observer_;
};

}  // namespace crunch
