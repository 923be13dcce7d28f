#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "crunch/network_state.hpp"
#include "crunch/routing.hpp"

namespace crunch {

/// Uniform double in [0, 1) drawn from the top 53 bits of the generator,
/// so request streams are reproducible independent of the standard
/// library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double exponential_sample(std::mt19937_64& rng, double mean) {
  return -mean * std::log1p(-uniform01(rng));
}

struct ServiceClass {
  std::string name;
  double traffic_share = 0.0;
  double bw_lo_gbps = 0.0;
  double bw_hi_gbps = 0.0;
  /// Fraction of the requested bandwidth that may be shed: b_min = b_req * (1 - f).
  double degradable_fraction = 0.0;
  /// Revenue multiplier theta, $ per Gbit.
  double theta = 0.0;
  /// Blocking penalty multiplier, $ per Gbit (0 = blocking is free).
  double blocking_multiplier = 0.0;
};

struct TrafficMix {
  std::array<ServiceClass, 3> classes;

  static TrafficMix defaults() {
    TrafficMix m;
    m.classes[0] = {"interactive", 0.20, 0.1, 4.0, 0.0, 0.08, 0.04};
    m.classes[1] = {"elastic", 0.30, 0.1, 6.0, 0.333, 0.06, 0.03};
    m.classes[2] = {"background", 0.50, 0.1, 8.0, 0.5, 0.04, 0.00};
    return m;
  }

  void validate() const {
    double total = 0.0;
    for (const auto& c : classes) total += c.traffic_share;
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("traffic shares must sum to 1");
    }
    if (classes[0].degradable_fraction != 0.0) {
      throw std::invalid_argument("interactive traffic must not be degradable");
    }
  }

  static TrafficMix from_json(const nlohmann::json& j) {
    TrafficMix m = defaults();
    for (size_t i = 0; i < m.classes.size(); ++i) {
      if (i >= j.size()) break;
      const auto& jc = j.at(i);
      ServiceClass& c = m.classes[i];
      c.name = jc.value("name", c.name);
      c.traffic_share = jc.value("traffic_share", c.traffic_share);
      c.bw_lo_gbps = jc.value("bw_lo_gbps", c.bw_lo_gbps);
      c.bw_hi_gbps = jc.value("bw_hi_gbps", c.bw_hi_gbps);
      c.degradable_fraction = jc.value("degradable_fraction", c.degradable_fraction);
      c.theta = jc.value("theta", c.theta);
      c.blocking_multiplier = jc.value("blocking_multiplier", c.blocking_multiplier);
    }
    m.validate();
    return m;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : classes) {
      arr.push_back({{"name", c.name},
                     {"traffic_share", c.traffic_share},
                     {"bw_lo_gbps", c.bw_lo_gbps},
                     {"bw_hi_gbps", c.bw_hi_gbps},
                     {"degradable_fraction", c.degradable_fraction},
                     {"theta", c.theta},
                     {"blocking_multiplier", c.blocking_multiplier}});
    }
    return arr;
  }
};

/// An incoming demand. duration is the sampled holding time used by the
/// simulation engine to schedule the departure; decision logic prices with
/// the expected holding time instead (it cannot observe the future).
struct Request {
  ConnId id = 0;
  NodeId src = -1;
  NodeId dst = -1;
  Bandwidth b_req;
  Bandwidth b_min;
  ServiceClassId service_class = ServiceClassId::kCustom;
  double arrival_time = 0.0;
  double duration = 0.0;
  /// theta * sqrt(shortest-path hops), $ per Gbit; fixed at creation on the
  /// bare topology.
  double rate_per_gbps = 0.0;
  /// SLA penalty paid if blocked, $.
  double blocking_cost = 0.0;
  int shortest_hops = 0;

  double revenue_rate(Bandwidth bw) const { return rate_per_gbps * bw.gbps(); }
};

/// Decision-time pricing horizon. Holding times are exponential, so the
/// expected remaining duration of any live connection equals the mean
/// holding time regardless of its age.
struct PricingContext {
  double mean_holding_s = 1800.0;

  double decision_revenue(const Request& r, Bandwidth bw) const {
    return r.revenue_rate(bw) * mean_holding_s;
  }
};

/// Revenue forgone (over the horizon) by throttling conn from its current
/// bandwidth down to b; zero when b >= current.
inline double lost_revenue(const Connection& conn, Bandwidth b, double horizon_s) {
  double diff = conn.revenue_rate(conn.b_cur) - conn.revenue_rate(b);
  return diff > 0.0 ? diff * horizon_s : 0.0;
}

inline Bandwidth min_bandwidth_for(const ServiceClass& cls, Bandwidth b_req) {
  double keep = 1.0 - cls.degradable_fraction;
  return Bandwidth::from_milli(
      static_cast<std::int64_t>(std::llround(static_cast<double>(b_req.milli()) * keep)));
}

/// Draws one request: class by traffic share, bandwidth uniform in the
/// class range, source-destination uniform over distinct ordered pairs,
/// duration exponential. Throws if the drawn pair is disconnected.
inline Request sample_request(std::mt19937_64& rng, double time, const TrafficMix& mix,
                              const Topology& topo, double mean_holding_s) {
  Request r;
  r.arrival_time = time;

  double u = uniform01(rng);
  size_t cls_idx = 0;
  double cum = 0.0;
  for (size_t i = 0; i < mix.classes.size(); ++i) {
    cum += mix.classes[i].traffic_share;
    if (u < cum) {
      cls_idx = i;
      break;
    }
    cls_idx = i;  // numerical guard: the last class absorbs u ~= 1
  }
  const ServiceClass& cls = mix.classes[cls_idx];
  r.service_class = static_cast<ServiceClassId>(cls_idx);

  double bw = cls.bw_lo_gbps + uniform01(rng) * (cls.bw_hi_gbps - cls.bw_lo_gbps);
  r.b_req = Bandwidth::from_gbps(bw);
  r.b_min = min_bandwidth_for(cls, r.b_req);

  int n = topo.node_count();
  if (n < 2) throw std::invalid_argument("topology needs >= 2 nodes");
  int i = static_cast<int>(uniform01(rng) * n);
  if (i >= n) i = n - 1;
  int j = static_cast<int>(uniform01(rng) * (n - 1));
  if (j >= n - 1) j = n - 2;
  if (j >= i) ++j;
  r.src = i;
  r.dst = j;

  r.duration = exponential_sample(rng, mean_holding_s);

  auto hops = shortest_hop_count(topo, r.src, r.dst);
  if (!hops) {
    throw std::runtime_error("request between disconnected nodes " +
                             topo.node_name(r.src) + " and " + topo.node_name(r.dst));
  }
  r.shortest_hops = *hops;
  double sqrt_len = std::sqrt(static_cast<double>(*hops));
  r.rate_per_gbps = cls.theta * sqrt_len;
  r.blocking_cost = r.b_min.gbps() * cls.blocking_multiplier * sqrt_len * mean_holding_s;
  return r;
}

/// The connection that serving `r` at bandwidth bw would create.
inline Connection connection_from_request(const Request& r, const Path& path,
                                          Bandwidth bw) {
  Connection c;
  c.id = r.id;
  c.src = r.src;
  c.dst = r.dst;
  c.path = path;
  c.b_req = r.b_req;
  c.b_min = r.b_min;
  c.b_cur = bw;
  c.service_class = r.service_class;
  c.rate_per_gbps = r.rate_per_gbps;
  c.t_start = r.arrival_time;
  c.t_end = r.arrival_time + r.duration;
  return c;
}

}  // namespace crunch
