#pragma once

#include "crunch/baselines.hpp"
#include "crunch/network_state.hpp"
#include "crunch/pricing.hpp"
#include "crunch/provisioner.hpp"

namespace crunch {

/// Seven-node demo network used by the `example` command and the golden
/// tests: every link carries 20 Gbps, six connections with hand-picked
/// revenue rates fill all links except E-F, and a request from A to F
/// arrives that no free-capacity path can carry.
///
/// Revenue rates are quoted per Gbps per time unit and the demo pricing
/// horizon is one time unit, so decision costs read directly in dollars.
inline Topology make_example_topology() {
  Topology t;
  for (const char* n : {"A", "B", "C", "D", "E", "F", "G"}) t.add_node(n);
  const Bandwidth cap = Bandwidth::from_gbps(20.0);
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"A", "B"}, {"A", "G"}, {"B", "C"}, {"B", "F"}, {"B", "G"}, {"C", "D"},
           {"C", "E"}, {"C", "F"}, {"D", "E"}, {"E", "F"}, {"F", "G"}}) {
    t.add_link(t.node(a), t.node(b), cap);
  }
  return t;
}

inline Connection make_example_connection(const Topology& t, ConnId id,
                                          const std::vector<std::string>& path_names,
                                          double alloc_gbps, double min_gbps,
                                          double rate_per_gbps) {
  Connection c;
  c.id = id;
  c.path = make_path_by_name(t, path_names);
  c.src = c.path.nodes.front();
  c.dst = c.path.nodes.back();
  c.b_req = Bandwidth::from_gbps(alloc_gbps);
  c.b_min = Bandwidth::from_gbps(min_gbps);
  c.b_cur = Bandwidth::from_gbps(alloc_gbps);
  c.rate_per_gbps = rate_per_gbps;
  return c;
}

inline NetworkState make_example_state() {
  NetworkState state(make_example_topology());
  const Topology& t = state.topology();
  state.allocate(make_example_connection(t, 1, {"A", "B", "C", "D", "E"}, 20, 12, 3));
  state.allocate(make_example_connection(t, 2, {"C", "E"}, 20, 10, 3));
  state.allocate(make_example_connection(t, 3, {"G", "F"}, 20, 10, 9));
  state.allocate(make_example_connection(t, 4, {"A", "G", "B"}, 20, 10, 1));
  state.allocate(make_example_connection(t, 5, {"C", "F"}, 20, 16, 30));
  state.allocate(make_example_connection(t, 6, {"B", "F"}, 20, 10, 8));
  return state;
}

inline Request make_example_request(const NetworkState& state) {
  Request r;
  r.id = 100;
  r.src = state.topology().node("A");
  r.dst = state.topology().node("F");
  r.b_req = Bandwidth::from_gbps(10.0);
  r.b_min = Bandwidth::from_gbps(5.0);
  r.service_class = ServiceClassId::kCustom;
  r.rate_per_gbps = 6.0;
  r.blocking_cost = 15.0;
  r.shortest_hops = 2;
  r.duration = 1.0;
  return r;
}

inline PricingContext example_pricing_context() { return PricingContext{1.0}; }

/// One approach's verdict on the demo request, run on a fresh copy of the
/// demo network.
struct ExampleOutcome {
  std::string approach;
  DecisionRecord record;
};

struct ExampleReport {
  ExampleOutcome sp_k1;
  ExampleOutcome lp_k1;
  ExampleOutcome provisioner;
  WeightedPathDiagnostic weighted_diagnostic;
  CandidateSet requested_side_candidate;  // capacitated search at b_req
};

inline ExampleReport run_example() {
  PricingContext ctx = example_pricing_context();
  ExampleReport report;

  {
    NetworkState state = make_example_state();
    DegradedRegistry registry;
    Request r = make_example_request(state);
    report.sp_k1 = {"sp-k1", sp_greedy_decide(state, registry, r, 1, ctx)};
  }
  {
    NetworkState state = make_example_state();
    DegradedRegistry registry;
    Request r = make_example_request(state);
    report.lp_k1 = {"lp-k1", lp_only_decide(state, registry, r, 1, ctx)};
  }
  {
    NetworkState state = make_example_state();
    DegradedRegistry registry;
    Request r = make_example_request(state);
    Cag cag(state, FreeWeightPolicy::kZero, ctx.mean_holding_s);
    state.set_observer([&cag](const StateEvent& e) { cag.apply_event(e); });
    CagDecision side = cag_provisioner(cag, r);
    if (side.set && !side.set->at_requested) {
      auto cap_req = cag.min_cost_path(r.src, r.dst, CagView::capacitated_at(r.b_req));
      if (cap_req) {
        report.requested_side_candidate = detail::candidate_from_cag_path(
            cag, *cap_req, r.b_req, true, CandidateQuality::kCandidate);
      }
    }
    report.provisioner = {"provisioner-k1",
                          provision(state, cag, registry, r, ctx, 1)};
  }
  {
    NetworkState state = make_example_state();
    Request r = make_example_request(state);
    auto diag = degradation_weighted_path(state, r.src, r.dst, r.b_min,
                                          ctx.mean_holding_s);
    if (!diag) throw std::logic_error("demo weighted-path diagnostic failed");
    report.weighted_diagnostic = *diag;
  }
  return report;
}

}  // namespace crunch
