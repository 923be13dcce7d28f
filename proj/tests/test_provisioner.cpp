#include <catch2/catch_amalgamated.hpp>

#include "crunch/example_network.hpp"
#include "crunch/provisioner.hpp"

using namespace crunch;
using Catch::Approx;

namespace {

struct DemoPipeline {
  NetworkState state;
  Request request;
  Cag cag;
  DegradedRegistry registry;
  PricingContext ctx = example_pricing_context();

  explicit DemoPipeline(FreeWeightPolicy policy = FreeWeightPolicy::kZero)
      : state(make_example_state()),
        request(make_example_request(state)),
        cag(state, policy, 1.0) {
    state.set_observer([this](const StateEvent& e) { cag.apply_event(e); });
  }
};

std::vector<std::string> names(const Topology& t, const Path& p) {
  std::vector<std::string> out;
  for (NodeId n : p.nodes) out.push_back(t.node_name(n));
  return out;
}

}  // namespace

TEST_CASE("step I on the demo network returns the good minimum-side set") {
  DemoPipeline demo;
  CagDecision d = cag_provisioner(demo.cag, demo.request);
  CHECK(d.kind == CagDecisionKind::kGood);
  REQUIRE(d.set);
  CHECK_FALSE(d.set->at_requested);
  CHECK(d.set->target == Bandwidth::from_gbps(5));
  CHECK(d.set->cost == Approx(15.0));
  REQUIRE(d.set->members.size() == 1);
  CHECK(d.set->members[0].id == 1);
  CHECK(d.set->members[0].shed == Bandwidth::from_gbps(5));
}

TEST_CASE("the requested-bandwidth branch loses the normalized comparison") {
  DemoPipeline demo;
  auto cap_req = demo.cag.min_cost_path(demo.request.src, demo.request.dst,
                                        CagView::capacitated_at(demo.request.b_req));
  REQUIRE(cap_req);
  CHECK(cap_req->true_cost == Approx(90.0));
  auto cap_min = demo.cag.min_cost_path(demo.request.src, demo.request.dst,
                                        CagView::capacitated_at(demo.request.b_min));
  REQUIRE(cap_min);
  CHECK(cap_req->true_cost / 10.0 > cap_min->true_cost / 5.0);
}

TEST_CASE("step I blocks when the relaxed graph has no terminal path") {
  Topology t;
  t.add_node("a");
  t.add_node("b");
  t.add_link(0, 1, Bandwidth::from_gbps(10));
  NetworkState state(std::move(t));
  state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 10, 10, 1.0));
  Cag cag(state, FreeWeightPolicy::kZero, 1.0);
  Request r;
  r.id = 9;
  r.src = 0;
  r.dst = 1;
  r.b_req = Bandwidth::from_gbps(2);
  r.b_min = Bandwidth::from_gbps(1);
  CagDecision d = cag_provisioner(cag, r);
  CHECK(d.kind == CagDecisionKind::kBlock);
}

TEST_CASE("profitability rule") {
  PricingContext ctx{1.0};
  Request r;
  r.b_req = Bandwidth::from_gbps(10);
  r.b_min = Bandwidth::from_gbps(5);
  r.rate_per_gbps = 6.0;
  r.blocking_cost = 15.0;

  CandidateSet set;
  set.target = r.b_min;

  set.cost = 15.0;  // 30 + 15 >= 15
  CHECK(profitable(r, set, ctx));
  set.cost = 50.0;  // 30 + 15 < 50
  CHECK_FALSE(profitable(r, set, ctx));
  set.cost = 45.0;  // boundary counts as profitable
  CHECK(profitable(r, set, ctx));
  set.cost = 0.0;
  CHECK(profitable(r, set, ctx));
}

TEST_CASE("end-to-end demo decision") {
  DemoPipeline demo;
  DecisionRecord rec =
      provision(demo.state, demo.cag, demo.registry, demo.request, demo.ctx, 1);
  CHECK(rec.outcome == DecisionRecord::Outcome::kServedAtMin);
  CHECK(rec.degradation_cost == Approx(15.0));
  CHECK(rec.decision_revenue == Approx(30.0));
  REQUIRE(rec.allocated_path);
  CHECK(names(demo.state.topology(), *rec.allocated_path) ==
        std::vector<std::string>{"A", "B", "C", "D", "E", "F"});
  CHECK(demo.state.connection(1).b_cur == Bandwidth::from_gbps(15));
  CHECK(demo.state.connection(demo.request.id).b_cur == Bandwidth::from_gbps(5));
  // Both the degraded connection and the under-served request are listed
  // for later upgrades.
  CHECK(demo.registry.contains(1));
  CHECK(demo.registry.contains(demo.request.id));
  demo.state.check_consistency();
}

TEST_CASE("a good set that is not profitable blocks the request") {
  NetworkState state = make_example_state();
  state.release(1);
  Connection pricey = make_example_connection(state.topology(), 1,
                                              {"A", "B", "C", "D", "E"}, 20, 12, 30.0);
  state.allocate(pricey);
  Request r = make_example_request(state);
  Cag cag(state, FreeWeightPolicy::kZero, 1.0);
  state.set_observer([&cag](const StateEvent& e) { cag.apply_event(e); });
  DegradedRegistry registry;
  auto before = state.to_json();
  DecisionRecord rec = provision(state, cag, registry, r, example_pricing_context(), 1);
  CHECK(rec.outcome == DecisionRecord::Outcome::kBlocked);
  CHECK(rec.blocking_cost_paid == 15.0);
  CHECK(state.to_json() == before);
}

TEST_CASE("no degradation possible anywhere blocks with the penalty") {
  Topology t;
  for (const char* n : {"a", "b", "c"}) t.add_node(n);
  t.add_link(0, 1, Bandwidth::from_gbps(10));
  t.add_link(1, 2, Bandwidth::from_gbps(10));
  NetworkState state(std::move(t));
  state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 10, 10, 1.0));
  state.allocate(make_example_connection(state.topology(), 2, {"b", "c"}, 10, 10, 1.0));
  Cag cag(state, FreeWeightPolicy::kZero, 1.0);
  DegradedRegistry registry;
  Request r;
  r.id = 9;
  r.src = 0;
  r.dst = 2;
  r.b_req = Bandwidth::from_gbps(2);
  r.b_min = Bandwidth::from_gbps(1);
  r.rate_per_gbps = 1.0;
  r.blocking_cost = 3.0;
  DecisionRecord rec = provision(state, cag, registry, r, PricingContext{1.0}, 2);
  CHECK(rec.outcome == DecisionRecord::Outcome::kBlocked);
  CHECK(rec.blocking_cost_paid == 3.0);
}

TEST_CASE("execute rolls back cleanly when the set cannot open a path") {
  NetworkState state = make_example_state();
  DegradedRegistry registry;
  Request r = make_example_request(state);
  auto before = state.to_json();

  CandidateSet bogus;
  bogus.target = r.b_min;
  bogus.members = {{4, Bandwidth::from_gbps(5)}};  // frees A-G/G-B only
  bogus.cost = 5.0;
  CHECK_THROWS_AS(execute(state, registry, r, bogus), std::logic_error);
  CHECK(state.to_json() == before);
  CHECK(registry.empty());
}

TEST_CASE("execute re-upgrades members out of leftover slack") {
  Topology t;
  t.add_node("a");
  t.add_node("b");
  t.add_link(0, 1, Bandwidth::from_gbps(20));
  NetworkState state(std::move(t));
  state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 10, 1, 2.0));
  DegradedRegistry registry;

  Request r;
  r.id = 9;
  r.src = 0;
  r.dst = 1;
  r.b_req = Bandwidth::from_gbps(5);
  r.b_min = Bandwidth::from_gbps(5);
  r.rate_per_gbps = 1.0;

  CandidateSet set;
  set.target = r.b_req;
  set.at_requested = true;
  set.members = {{1, Bandwidth::from_gbps(5)}};
  set.cost = 10.0;

  ExecutionResult exec = execute(state, registry, r, set);
  // 10 Gbps were spare, so the member gets its 5 Gbps straight back.
  CHECK(state.connection(1).b_cur == Bandwidth::from_gbps(10));
  CHECK(exec.executed.empty());
  CHECK_FALSE(registry.contains(1));
  // The request got its full bandwidth, so it is not registered either.
  CHECK_FALSE(registry.contains(9));
}

TEST_CASE("departure upgrades follow the registry priority order") {
  SECTION("full restoration when the whole path frees up") {
    Topology t;
    t.add_node("a");
    t.add_node("b");
    t.add_link(0, 1, Bandwidth::from_gbps(10));
    NetworkState state(std::move(t));
    state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 8, 2, 1.0));
    state.allocate(make_example_connection(state.topology(), 2, {"a", "b"}, 2, 2, 9.0));
    state.throttle(1, Bandwidth::from_gbps(4));
    DegradedRegistry registry;
    registry.add(state.connection(1));

    state.release(2);
    on_departure(state, registry);
    CHECK(state.connection(1).b_cur == Bandwidth::from_gbps(8));
    CHECK_FALSE(registry.contains(1));
  }

  SECTION("higher revenue rate upgrades first on a shared bottleneck") {
    Topology t;
    t.add_node("a");
    t.add_node("b");
    t.add_link(0, 1, Bandwidth::from_gbps(15));
    NetworkState state(std::move(t));
    Connection c1 = make_example_connection(state.topology(), 1, {"a", "b"}, 10, 1, 0.04);
    c1.b_cur = Bandwidth::from_gbps(2);  // arrives already degraded
    state.allocate(c1);
    Connection c2 = make_example_connection(state.topology(), 2, {"a", "b"}, 10, 1, 0.08);
    c2.b_cur = Bandwidth::from_gbps(2);
    state.allocate(c2);
    // A filler leaves exactly 5 Gbps of slack for upgrades.
    state.allocate(make_example_connection(state.topology(), 3, {"a", "b"}, 6, 6, 1.0));
    CHECK(state.free_capacity(0) == Bandwidth::from_gbps(5));

    DegradedRegistry registry;
    registry.add(state.connection(1));
    registry.add(state.connection(2));

    on_departure(state, registry);
    // The 0.08-rate connection claims the 5 Gbps first.
    CHECK(state.connection(2).b_cur == Bandwidth::from_gbps(7));
    CHECK(state.connection(1).b_cur == Bandwidth::from_gbps(2));
    CHECK(registry.contains(1));
    CHECK(registry.contains(2));
  }

  SECTION("equal rates: fewer hops first") {
    Topology t;
    for (const char* n : {"a", "b", "c", "d", "e"}) t.add_node(n);
    t.add_link(0, 1, Bandwidth::from_gbps(10));  // a-b
    t.add_link(1, 2, Bandwidth::from_gbps(10));  // b-c
    t.add_link(2, 3, Bandwidth::from_gbps(10));  // c-d
    t.add_link(3, 4, Bandwidth::from_gbps(10));  // d-e
    NetworkState state(std::move(t));
    // Both degraded connections need the shared a-b link; the 2-hop one
    // wins the tie.
    Connection c1 = make_example_connection(state.topology(), 1, {"a", "b", "c"}, 8, 1, 1.0);
    c1.b_cur = Bandwidth::from_gbps(2);
    state.allocate(c1);
    Connection c2 =
        make_example_connection(state.topology(), 2, {"a", "b", "c", "d", "e"}, 8, 1, 1.0);
    c2.b_cur = Bandwidth::from_gbps(2);
    state.allocate(c2);
    state.allocate(make_example_connection(state.topology(), 3, {"a", "b"}, 3, 3, 1.0));
    CHECK(state.free_capacity(0) == Bandwidth::from_gbps(3));

    DegradedRegistry registry;
    registry.add(state.connection(1));
    registry.add(state.connection(2));
    on_departure(state, registry);
    CHECK(state.connection(1).b_cur == Bandwidth::from_gbps(5));
    CHECK(state.connection(2).b_cur == Bandwidth::from_gbps(2));
  }
}

TEST_CASE("registry ordering key") {
  DegradedRegistry registry;
  Topology t;
  t.add_node("a");
  t.add_node("b");
  t.add_link(0, 1, Bandwidth::from_gbps(100));
  NetworkState state(std::move(t));
  state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 5, 1, 0.5));
  state.allocate(make_example_connection(state.topology(), 2, {"a", "b"}, 5, 1, 2.0));
  state.allocate(make_example_connection(state.topology(), 3, {"a", "b"}, 5, 1, 1.0));
  for (ConnId id : {1, 2, 3}) registry.add(state.connection(id));
  CHECK(registry.ordered() == std::vector<ConnId>{2, 3, 1});
  registry.remove(3);
  CHECK(registry.ordered() == std::vector<ConnId>{2, 1});
  CHECK(registry.size() == 2);
}
