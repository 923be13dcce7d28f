#include <catch2/catch_amalgamated.hpp>

#include "crunch/example_network.hpp"
#include "crunch/lp.hpp"
#include "support/oracles.hpp"
#include "support/test_graphs.hpp"

using namespace crunch;
using namespace crunch::testsupport;
using Catch::Approx;

namespace {

Path demo_path(const NetworkState& state, std::initializer_list<const char*> nodes) {
  std::vector<std::string> names;
  for (const char* n : nodes) names.emplace_back(n);
  return make_path_by_name(state.topology(), names);
}

double y_of(const LpSolution& sol, ConnId id) {
  for (const auto& nb : sol.bandwidths) {
    if (nb.id == id) return nb.y_gbps;
  }
  FAIL("connection missing from solution");
  return 0.0;
}

}  // namespace

TEST_CASE("instance construction gathers the crossing connections") {
  NetworkState state = make_example_state();

  SECTION("shortest demo path") {
    LpInstance inst = build_instance(state, demo_path(state, {"A", "G", "F"}),
                                     Bandwidth::from_gbps(5), 1.0);
    REQUIRE(inst.connections.size() == 2);
    CHECK(inst.connections[0].id == 4);  // A-G carries connection 4
    CHECK(inst.connections[1].id == 3);  // G-F carries connection 3
    CHECK(inst.capacities[0] == Bandwidth::from_gbps(20));
    CHECK(inst.capacities[1] == Bandwidth::from_gbps(20));
  }

  SECTION("longer path with a multi-link connection") {
    LpInstance inst = build_instance(state, demo_path(state, {"A", "G", "B", "C", "E", "F"}),
                                     Bandwidth::from_gbps(5), 1.0);
    std::set<ConnId> ids;
    for (const auto& c : inst.connections) ids.insert(c.id);
    CHECK(ids == std::set<ConnId>{1, 2, 4});
    for (const auto& c : inst.connections) {
      if (c.id == 4) CHECK(c.rows == std::vector<int>{0, 1});  // A-G and G-B
    }
  }

  SECTION("free path has no connections") {
    Topology t;
    t.add_node("x");
    t.add_node("y");
    t.add_link(0, 1, Bandwidth::from_gbps(20));
    NetworkState empty(std::move(t));
    LpInstance inst = build_instance(empty, make_path_by_name(empty.topology(), {"x", "y"}),
                                     Bandwidth::from_gbps(5), 1.0);
    CHECK(inst.connections.empty());
    auto sol = solve(inst);
    REQUIRE(sol);
    CHECK(sol->objective == 0.0);
  }
}

TEST_CASE("solver on the demo shortest path") {
  NetworkState state = make_example_state();
  Path agf = demo_path(state, {"A", "G", "F"});

  SECTION("5 Gbps costs $50") {
    auto sol = solve(build_instance(state, agf, Bandwidth::from_gbps(5), 1.0));
    REQUIRE(sol);
    CHECK(sol->objective == Approx(50.0).margin(1e-6));
    CHECK(y_of(*sol, 4) == Approx(15.0).margin(1e-6));
    CHECK(y_of(*sol, 3) == Approx(15.0).margin(1e-6));
  }

  SECTION("20 Gbps is infeasible") {
    CHECK_FALSE(solve(build_instance(state, agf, Bandwidth::from_gbps(20), 1.0)));
  }

  SECTION("solutions respect both constraint families") {
    auto inst = build_instance(state, agf, Bandwidth::from_gbps(8), 1.0);
    auto sol = solve(inst);
    REQUIRE(sol);
    for (const auto& nb : sol->bandwidths) {
      const Connection& c = state.connection(nb.id);
      CHECK(nb.y_gbps >= c.b_min.gbps() - 1e-9);
      CHECK(nb.y_gbps <= c.b_cur.gbps() + 1e-9);
    }
    std::vector<double> usage(inst.links.size(), 0.0);
    for (const auto& c : inst.connections) {
      for (int r : c.rows) usage[static_cast<size_t>(r)] += y_of(*sol, c.id);
    }
    for (size_t j = 0; j < inst.links.size(); ++j) {
      CHECK(usage[j] <= (inst.capacities[j] - inst.b_c).gbps() + 1e-9);
    }
  }
}

TEST_CASE("objective is monotone in the target bandwidth") {
  NetworkState state = make_example_state();
  Path agf = demo_path(state, {"A", "G", "F"});
  double prev = -1.0;
  bool seen_infeasible = false;
  for (double b = 1.0; b <= 22.0; b += 1.0) {
    auto sol = solve(build_instance(state, agf, Bandwidth::from_gbps(b), 1.0));
    if (!sol) {
      seen_infeasible = true;
      continue;
    }
    CHECK_FALSE(seen_infeasible);  // infeasibility is monotone too
    CHECK(sol->objective >= prev - 1e-9);
    prev = sol->objective;
  }
  CHECK(seen_infeasible);
}

TEST_CASE("equal rates reduce to total shed bandwidth") {
  Topology t;
  for (const char* n : {"a", "b", "c", "d"}) t.add_node(n);
  t.add_link(0, 1, Bandwidth::from_gbps(10));
  t.add_link(1, 2, Bandwidth::from_gbps(10));
  t.add_link(2, 3, Bandwidth::from_gbps(10));
  NetworkState state(std::move(t));
  // Link-disjoint connections, all at rate 2.
  state.allocate(make_example_connection(state.topology(), 1, {"a", "b"}, 10, 0.001, 2.0));
  state.allocate(make_example_connection(state.topology(), 2, {"b", "c"}, 10, 0.001, 2.0));
  state.allocate(make_example_connection(state.topology(), 3, {"c", "d"}, 10, 0.001, 2.0));

  auto inst = build_instance(state, make_path_by_name(state.topology(), {"a", "b", "c", "d"}),
                             Bandwidth::from_gbps(4), 1.0);
  auto sol = solve(inst);
  REQUIRE(sol);
  // Each of the three links must shed exactly 4.
  CHECK(sol->objective == Approx(2.0 * 12.0).margin(1e-6));
}

TEST_CASE("solver matches a grid brute force on random instances") {
  std::mt19937_64 rng(404);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // Linear chain topology of up to 4 links, connections over random spans.
    int links = irand(rng, 1, 4);
    Topology t;
    for (int i = 0; i <= links; ++i) t.add_node(std::string(1, static_cast<char>('a' + i)));
    for (int i = 0; i < links; ++i) {
      t.add_link(i, i + 1, Bandwidth::from_gbps(0.2 + 0.05 * irand(rng, 0, 4)));
    }
    NetworkState state(std::move(t));
    int conns = irand(rng, 1, 5);
    ConnId id = 1;
    for (int c = 0; c < conns; ++c) {
      int lo = irand(rng, 0, links - 1);
      int hi = irand(rng, lo + 1, links);
      std::vector<NodeId> nodes;
      for (int n = lo; n <= hi; ++n) nodes.push_back(n);
      Path p = make_path(state.topology(), nodes);
      Bandwidth room = state.free_capacity(p.links.front());
      for (LinkId l : p.links) room = min(room, state.free_capacity(l));
      if (room < Bandwidth::from_gbps(0.02)) continue;
      std::int64_t bw_milli = 10 * irand(rng, 2, static_cast<int>(room.milli() / 10));
      Bandwidth bw = Bandwidth::from_milli(bw_milli);
      Connection conn;
      conn.id = id++;
      conn.path = p;
      conn.src = p.nodes.front();
      conn.dst = p.nodes.back();
      conn.b_req = bw;
      conn.b_min = Bandwidth::from_milli(10 * irand(rng, 0, static_cast<int>(bw.milli() / 10)));
      if (!conn.b_min.positive()) conn.b_min = Bandwidth::from_milli(10);
      if (conn.b_min > bw) conn.b_min = bw;
      conn.b_cur = bw;
      conn.rate_per_gbps = 0.5 + urand(rng) * 4.0;
      state.allocate(conn);
    }

    std::vector<NodeId> all_nodes;
    for (int n = 0; n <= links; ++n) all_nodes.push_back(n);
    Path full = make_path(state.topology(), all_nodes);
    Bandwidth target = Bandwidth::from_milli(10 * irand(rng, 1, 15));
    LpInstance inst = build_instance(state, full, target, 1.0);
    auto sol = solve(inst);
    auto grid = grid_lp_minimum(inst, 0.01);
    if (!sol) {
      // Exact infeasibility must agree with the arithmetic bound.
      std::vector<std::int64_t> budget(inst.links.size());
      for (size_t j = 0; j < inst.links.size(); ++j) {
        budget[j] = (inst.capacities[j] - inst.b_c).milli();
      }
      for (const auto& c : inst.connections) {
        for (int j : c.rows) budget[static_cast<size_t>(j)] -= c.b_min.milli();
      }
      bool impossible = false;
      for (std::int64_t bj : budget) impossible = impossible || bj < 0;
      CHECK(impossible);
      continue;
    }
    ++solved;
    if (grid) CHECK(sol->objective <= *grid + 1e-4);
  }
  CHECK(solved >= 10);
}

TEST_CASE("step II keeps the affordable side of the demo example") {
  NetworkState state = make_example_state();
  Request r = make_example_request(state);

  SECTION("single path: the minimum-bandwidth set wins the ratio tie") {
    auto best = lp_provisioner(state, r, 1, std::nullopt, 1.0);
    REQUIRE(best);
    CHECK(best->cost == Approx(50.0).margin(1e-6));
    CHECK_FALSE(best->at_requested);
    REQUIRE(best->members.size() == 2);
    for (const auto& m : best->members) CHECK(m.shed == Bandwidth::from_gbps(5));
  }

  SECTION("a cheap prior is kept") {
    CandidateSet prior;
    prior.members = {{1, Bandwidth::from_gbps(5)}};
    prior.target = r.b_min;
    prior.cost = 15.0;
    auto best = lp_provisioner(state, r, 3, prior, 1.0);
    REQUIRE(best);
    CHECK(best->cost == Approx(15.0));
    CHECK(best->members == prior.members);
  }

  SECTION("nothing feasible and no prior blocks") {
    Request big = r;
    big.b_req = Bandwidth::from_gbps(50);
    big.b_min = Bandwidth::from_gbps(45);
    CHECK_FALSE(lp_provisioner(state, big, 3, std::nullopt, 1.0));
  }
}
