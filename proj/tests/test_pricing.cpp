#include <catch2/catch_amalgamated.hpp>

#include "crunch/example_network.hpp"
#include "crunch/pricing.hpp"

using namespace crunch;
using Catch::Approx;

TEST_CASE("revenue rate formula") {
  TrafficMix mix = TrafficMix::defaults();

  SECTION("background at 8 Gbps over a 4-hop shortest path") {
    Request r;
    r.b_req = Bandwidth::from_gbps(8);
    r.rate_per_gbps = mix.classes[2].theta * std::sqrt(4.0);
    CHECK(r.revenue_rate(r.b_req) == Approx(0.64).epsilon(1e-12));
  }

  SECTION("interactive at 4 Gbps over a 4-hop shortest path") {
    Request r;
    r.rate_per_gbps = mix.classes[0].theta * std::sqrt(4.0);
    CHECK(r.revenue_rate(Bandwidth::from_gbps(4)) == Approx(0.64).epsilon(1e-12));
  }

  SECTION("zero bandwidth earns nothing") {
    Request r;
    r.rate_per_gbps = 123.0;
    CHECK(r.revenue_rate(Bandwidth::zero()) == 0.0);
  }
}

TEST_CASE("lost revenue on the demo connections") {
  NetworkState state = make_example_state();
  const double horizon = example_pricing_context().mean_holding_s;

  SECTION("throttling connection 1 by 5 Gbps forgoes $15") {
    CHECK(lost_revenue(state.connection(1), Bandwidth::from_gbps(15), horizon) ==
          Approx(15.0));
  }

  SECTION("no change, no loss") {
    const Connection& c = state.connection(2);
    CHECK(lost_revenue(c, c.b_cur, horizon) == 0.0);
    CHECK(lost_revenue(c, c.b_cur + Bandwidth::from_gbps(1), horizon) == 0.0);
  }

  SECTION("connections 3 and 4 shed 5 Gbps each for $50 total") {
    double total = lost_revenue(state.connection(3), Bandwidth::from_gbps(15), horizon) +
                   lost_revenue(state.connection(4), Bandwidth::from_gbps(15), horizon);
    CHECK(total == Approx(50.0));
  }

  SECTION("linearity in the shed amount") {
    const Connection& c = state.connection(6);
    for (double shed : {0.5, 2.0, 7.25}) {
      Bandwidth b = c.b_cur - Bandwidth::from_gbps(shed);
      CHECK(lost_revenue(c, b, horizon) == Approx(c.rate_per_gbps * shed * horizon));
    }
  }
}

TEST_CASE("blocking costs") {
  TrafficMix mix = TrafficMix::defaults();

  SECTION("background blocking is free") {
    CHECK(mix.classes[2].blocking_multiplier == 0.0);
  }

  SECTION("elastic penalty is half the minimum-bandwidth revenue") {
    // multiplier 0.03 is exactly half of theta 0.06
    std::mt19937_64 rng(5);
    Topology t = make_example_topology();
    for (int i = 0; i < 200; ++i) {
      Request r = sample_request(rng, 0.0, mix, t, 1800.0);
      if (r.service_class != ServiceClassId::kElastic) continue;
      double min_revenue = r.revenue_rate(r.b_min) * 1800.0;
      CHECK(r.blocking_cost == Approx(0.5 * min_revenue).epsilon(1e-9));
    }
  }

  SECTION("fixed demo penalty") {
    NetworkState state = make_example_state();
    CHECK(make_example_request(state).blocking_cost == 15.0);
  }
}

TEST_CASE("request sampling distributions") {
  TrafficMix mix = TrafficMix::defaults();
  Topology t = make_example_topology();
  std::mt19937_64 rng(12345);
  const int n = 100000;
  const double mean_holding = 1800.0;

  std::array<int, 3> counts{0, 0, 0};
  double duration_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    Request r = sample_request(rng, 0.0, mix, t, mean_holding);
    counts[static_cast<size_t>(r.service_class)]++;
    duration_sum += r.duration;

    size_t cls = static_cast<size_t>(r.service_class);
    CHECK(r.b_req.gbps() >= mix.classes[cls].bw_lo_gbps);
    CHECK(r.b_req.gbps() <= mix.classes[cls].bw_hi_gbps);
    // b_min relates to b_req exactly via the degradable fraction (on the
    // bandwidth grid).
    std::int64_t expect = std::llround(static_cast<double>(r.b_req.milli()) *
                                       (1.0 - mix.classes[cls].degradable_fraction));
    CHECK(r.b_min.milli() == expect);
    CHECK(r.src != r.dst);
  }

  CHECK(std::abs(counts[0] / double(n) - 0.20) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.30) < 0.01);
  CHECK(std::abs(counts[2] / double(n) - 0.50) < 0.01);
  CHECK(std::abs(duration_sum / n - mean_holding) / mean_holding < 0.02);
}

TEST_CASE("interactive requests are never degradable") {
  TrafficMix mix = TrafficMix::defaults();
  Topology t = make_example_topology();
  std::mt19937_64 rng(77);
  for (int i = 0; i < 2000; ++i) {
    Request r = sample_request(rng, 0.0, mix, t, 1800.0);
    if (r.service_class == ServiceClassId::kInteractive) CHECK(r.b_min == r.b_req);
  }
}

TEST_CASE("two-node topology draws the only pair") {
  Topology t;
  t.add_node("a");
  t.add_node("b");
  t.add_link(0, 1, Bandwidth::from_gbps(10));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    Request r = sample_request(rng, 0.0, TrafficMix::defaults(), t, 60.0);
    CHECK(((r.src == 0 && r.dst == 1) || (r.src == 1 && r.dst == 0)));
  }
}

TEST_CASE("disconnected pair fails at creation") {
  Topology t;
  t.add_node("a");
  t.add_node("b");
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(sample_request(rng, 0.0, TrafficMix::defaults(), t, 60.0),
                  std::runtime_error);
}

TEST_CASE("traffic mix validation") {
  TrafficMix bad = TrafficMix::defaults();
  bad.classes[0].traffic_share = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  TrafficMix nondeg = TrafficMix::defaults();
  nondeg.classes[0].degradable_fraction = 0.1;
  CHECK_THROWS_AS(nondeg.validate(), std::invalid_argument);

  TrafficMix round = TrafficMix::from_json(TrafficMix::defaults().to_json());
  CHECK(round.classes[1].theta == 0.06);
}
