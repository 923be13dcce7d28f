#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <map>
#include <queue>
#include <sstream>
#include <thread>
#include <vector>

#include "crunch/baselines.hpp"
#include "crunch/metrics.hpp"
#include "crunch/scenario.hpp"

namespace crunch {

using DecisionSink = std::function<void(double time, const DecisionRecord&)>;

/// One replication: the discrete-event loop over sinusoidal Poisson
/// arrivals (by thinning) and exponential departures. The request stream
/// is a pure function of (scenario, seed) — decisions never touch the
/// stream's generator, so different policies face identical workloads.
class SimulationEngine {
 public:
  SimulationEngine(const Topology& base_topology, const ScenarioConfig& scenario,
                   const ApproachPolicy& policy, std::uint64_t seed,
                   DecisionSink decision_sink = nullptr)
      : scenario_(scenario),
        policy_cfg_(policy),
        ctx_{scenario.mean_holding_s},
        state_(base_topology.with_uniform_capacity(Bandwidth::from_gbps(
            policy.capacity_override_gbps.value_or(scenario.link_capacity_gbps)))),
        runtime_(policy, ctx_),
        stream_rng_(seed),
        decision_sink_(std::move(decision_sink)) {
    scenario_.validate();
    frame_.init(scenario_);
    measure_start_ = scenario_.warmup_days * scenario_.day_length_s;
    end_time_ = (scenario_.warmup_days + scenario_.days) * scenario_.day_length_s;
    runtime_.attach(state_);
    state_.set_observer([this](const StateEvent& e) { on_event(e); });
  }

  MetricsFrame run() {
    double next_arrival = draw_next_arrival(0.0);
    while (true) {
      bool have_arrival = next_arrival <= end_time_;
      bool have_departure = !departures_.empty();
      if (!have_arrival && !have_departure) break;

      if (have_departure &&
          (!have_arrival || departures_.top().first <= next_arrival)) {
        auto [td, id] = departures_.top();
        departures_.pop();
        now_ = td;
        process_departure(id);
      } else {
        now_ = next_arrival;
        process_arrival();
        next_arrival = draw_next_arrival(next_arrival);
      }
    }
    // Close the books on connections still alive at the horizon.
    now_ = end_time_;
    for (const auto& [id, t] : last_change_) {
      const Connection& c = state_.connection(id);
      accrue(c.revenue_rate(c.b_cur), t, end_time_);
    }
    return frame_;
  }

 private:
  void on_event(const StateEvent& e) {
    switch (e.kind) {
      case StateEvent::Kind::kConnectionAdded:
        last_change_[e.conn] = now_;
        break;
      case StateEvent::Kind::kConnectionRemoved:
        // The engine accrues before it releases; nothing left to do.
        last_change_.erase(e.conn);
        break;
      case StateEvent::Kind::kBandwidthChanged: {
        auto it = last_change_.find(e.conn);
        if (it != last_change_.end()) {
          const Connection& c = state_.connection(e.conn);
          accrue(c.rate_per_gbps * e.old_bw.gbps(), it->second, now_);
          it->second = now_;
        }
        break;
      }
      case StateEvent::Kind::kFreeCapacityChanged:
        break;
    }
    runtime_.on_event(e);
  }

  double draw_next_arrival(double t) {
    const double lmax = scenario_.lambda_max();
    if (lmax <= 0.0) return end_time_ + 1.0;
    while (true) {
      t += exponential_sample(stream_rng_, 1.0 / lmax);
      if (t > end_time_) return t;
      if (uniform01(stream_rng_) * lmax <= scenario_.lambda(t)) return t;
    }
  }

  void process_arrival() {
    Request r = sample_request(stream_rng_, now_, scenario_.mix, state_.topology(),
                               scenario_.mean_holding_s);
    r.id = next_id_++;

    int b = bin_of(now_);
    if (b >= 0) {
      frame_.offered[static_cast<size_t>(b)]++;
      frame_.offered_min_gbps_s[static_cast<size_t>(b)] +=
          r.b_min.gbps() * scenario_.mean_holding_s;
    }

    if (auto path = capacitated_shortest_path(state_, r.src, r.dst, r.b_req)) {
      state_.allocate(connection_from_request(r, *path, r.b_req));
      departures_.emplace(r.arrival_time + r.duration, r.id);
      return;
    }

    // Crunched.
    size_t cls = static_cast<size_t>(r.service_class);
    if (b >= 0) {
      frame_.crunched[static_cast<size_t>(b)]++;
      frame_.day_crunched_by_class[static_cast<size_t>(day_of(b))][cls]++;
    }

    auto t0 = std::chrono::steady_clock::now();
    DecisionRecord rec = runtime_.decide_crunched(registry_, r);
    auto t1 = std::chrono::steady_clock::now();
    if (b >= 0) {
      frame_.decision_us_sum +=
          std::chrono::duration<double, std::micro>(t1 - t0).count();
      frame_.decision_count++;
    }
    if (decision_sink_) decision_sink_(now_, rec);

    if (rec.served()) {
      departures_.emplace(r.arrival_time + r.duration, r.id);
      if (b >= 0) {
        frame_.day_served_crunched_by_class[static_cast<size_t>(day_of(b))][cls]++;
        frame_.served_crunched_count++;
        frame_.served_crunched_hops_sum += rec.allocated_path ? rec.allocated_path->hops() : 0;
      }
    } else if (b >= 0) {
      frame_.blocking_cost[static_cast<size_t>(b)] += rec.blocking_cost_paid;
    }
  }

  void process_departure(ConnId id) {
    auto it = last_change_.find(id);
    if (it != last_change_.end()) {
      const Connection& c = state_.connection(id);
      accrue(c.revenue_rate(c.b_cur), it->second, now_);
    }
    state_.release(id);
    registry_.remove(id);
    on_departure(state_, registry_);
  }

  /// Adds rate * dt dollars into the measured bins overlapping [t0, t1).
  void accrue(double rate_per_s, double t0, double t1) {
    if (rate_per_s <= 0.0) return;
    t0 = std::max(t0, measure_start_);
    t1 = std::min(t1, end_time_);
    if (t1 <= t0) return;
    double rel0 = t0 - measure_start_;
    double rel1 = t1 - measure_start_;
    int b0 = static_cast<int>(rel0 / frame_.bin_s);
    int b1 = static_cast<int>(rel1 / frame_.bin_s);
    b1 = std::min(b1, frame_.total_bins() - 1);
    for (int b = b0; b <= b1; ++b) {
      double lo = std::max(rel0, b * frame_.bin_s);
      double hi = std::min(rel1, (b + 1) * frame_.bin_s);
      if (hi > lo) frame_.revenue[static_cast<size_t>(b)] += rate_per_s * (hi - lo);
    }
  }

  int bin_of(double t) const {
    if (t < measure_start_ || t >= end_time_) return -1;
    return static_cast<int>((t - measure_start_) / frame_.bin_s);
  }

  int day_of(int bin) const { return bin / frame_.bins_per_day; }

  ScenarioConfig scenario_;
  ApproachPolicy policy_cfg_;
  PricingContext ctx_;
  NetworkState state_;
  PolicyRuntime runtime_;
  DegradedRegistry registry_;
  MetricsFrame frame_;
  std::mt19937_64 stream_rng_;
  DecisionSink decision_sink_;

  std::priority_queue<std::pair<double, ConnId>, std::vector<std::pair<double, ConnId>>,
                      std::greater<>>
      departures_;
  std::map<ConnId, double> last_change_;
  ConnId next_id_ = 1;
  double now_ = 0.0;
  double measure_start_ = 0.0;
  double end_time_ = 0.0;
};

inline MetricsFrame run_simulation(const Topology& topology, const ScenarioConfig& scenario,
                                   const ApproachPolicy& policy, std::uint64_t seed,
                                   DecisionSink sink = nullptr) {
  SimulationEngine engine(topology, scenario, policy, seed, std::move(sink));
  return engine.run();
}

inline int worker_threads_from_env(int tasks) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("CRUNCH_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return std::min(hw, std::max(tasks, 1));
}

/// All policies against the common per-seed request streams. Crunch
/// windows come from the plain baseline run of the same seed; window
/// profits of every policy are measured inside those windows.
struct Comparison {
  ScenarioConfig scenario;
  std::vector<std::uint64_t> seeds;
  std::vector<ApproachPolicy> policies;
  std::vector<std::vector<MetricsFrame>> frames;          // [policy][seed]
  std::vector<std::vector<CrunchWindow>> baseline_windows;  // [seed]
  std::vector<std::vector<double>> window_profit;         // [policy][seed]

  int baseline_index = -1;
  double total_capacity_gbps = 0.0;  // at the scenario's (non-override) capacity

  double window_profit_mean(size_t p) const {
    double s = 0.0;
    for (double v : window_profit[p]) s += v;
    return s / static_cast<double>(window_profit[p].size());
  }

  /// Half-width of the 95% confidence interval over seeds (normal
  /// approximation when more seeds than the t-table covers).
  double window_profit_ci95(size_t p) const {
    return ci95(window_profit[p]);
  }

  static double ci95(const std::vector<double>& xs) {
    size_t n = xs.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    static const double t975[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447,
                                  2.365, 2.306,  2.262, 2.228, 2.201, 2.179, 2.160,
                                  2.145, 2.131,  2.120, 2.110, 2.101, 2.093};
    double t = n - 1 < 20 ? t975[n - 1] : 1.96;
    return t * std::sqrt(var / static_cast<double>(n));
  }
};

inline Comparison compare(const Topology& topology, const ScenarioConfig& scenario,
                          const std::vector<ApproachPolicy>& policies,
                          const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed required");
  Comparison cmp;
  cmp.scenario = scenario;
  cmp.seeds = seeds;
  cmp.policies = policies;
  for (size_t p = 0; p < policies.size(); ++p) {
    if (policies[p].kind == ApproachPolicy::Kind::kBaseline &&
        !policies[p].capacity_override_gbps) {
      cmp.baseline_index = static_cast<int>(p);
      break;
    }
  }
  if (cmp.baseline_index < 0) {
    throw std::invalid_argument("comparison requires the plain baseline policy");
  }
  cmp.total_capacity_gbps =
      scenario.link_capacity_gbps * static_cast<double>(topology.link_count());

  cmp.frames.assign(policies.size(), std::vector<MetricsFrame>(seeds.size()));
  struct Task {
    size_t p;
    size_t s;
  };
  std::vector<Task> tasks;
  for (size_t p = 0; p < policies.size(); ++p) {
    for (size_t s = 0; s < seeds.size(); ++s) tasks.push_back({p, s});
  }
  std::atomic<size_t> next{0};
  int workers = worker_threads_from_env(static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        const Task& t = tasks[i];
        cmp.frames[t.p][t.s] =
            run_simulation(topology, scenario, cmp.policies[t.p], seeds[t.s]);
      }
    });
  }
  for (auto& th : pool) th.join();

  cmp.baseline_windows.resize(seeds.size());
  for (size_t s = 0; s < seeds.size(); ++s) {
    cmp.baseline_windows[s] = daily_crunch_windows(
        cmp.frames[static_cast<size_t>(cmp.baseline_index)][s], scenario.crunch_threshold);
  }
  cmp.window_profit.assign(policies.size(), std::vector<double>(seeds.size(), 0.0));
  for (size_t p = 0; p < policies.size(); ++p) {
    for (size_t s = 0; s < seeds.size(); ++s) {
      cmp.window_profit[p][s] =
          profit_in_daily_windows(cmp.frames[p][s], cmp.baseline_windows[s]);
    }
  }
  return cmp;
}

// ---------------------------------------------------------------------------
// CSV reports. Schemas are versioned; the header lines are pinned by tests.

inline constexpr const char* kDailyCsvHeader =
    "schema_version,policy,seed,day,revenue_usd,blocking_cost_usd,profit_usd,offered,"
    "crunched,crunched_interactive,crunched_elastic,crunched_background,"
    "served_interactive,served_elastic,served_background";

inline constexpr const char* kSummaryCsvHeader =
    "schema_version,policy,seeds,window_profit_mean_usd,window_profit_ci95_usd,"
    "windows_total,window_minutes_mean,crunched_total,acceptance_interactive,"
    "acceptance_elastic,acceptance_background,mean_served_path_hops,mean_decision_us";

inline constexpr const char* kWindowsCsvHeader =
    "schema_version,seed,window,start_s,end_s,offered_min_load_ratio";

inline std::string daily_csv(const Comparison& cmp) {
  std::ostringstream os;
  os << kDailyCsvHeader << "\n";
  os << std::setprecision(12);
  for (size_t p = 0; p < cmp.policies.size(); ++p) {
    for (size_t s = 0; s < cmp.seeds.size(); ++s) {
      const MetricsFrame& f = cmp.frames[p][s];
      for (int d = 0; d < f.days; ++d) {
        const auto& cr = f.day_crunched_by_class[static_cast<size_t>(d)];
        const auto& sv = f.day_served_crunched_by_class[static_cast<size_t>(d)];
        os << 1 << ',' << cmp.policies[p].name << ',' << cmp.seeds[s] << ',' << d << ','
           << f.day_revenue(d) << ',' << f.day_blocking(d) << ',' << f.day_profit(d) << ','
           << f.day_offered(d) << ',' << f.day_crunched(d) << ',' << cr[0] << ',' << cr[1]
           << ',' << cr[2] << ',' << sv[0] << ',' << sv[1] << ',' << sv[2] << "\n";
      }
    }
  }
  return os.str();
}

inline std::string summary_csv(const Comparison& cmp) {
  std::ostringstream os;
  os << kSummaryCsvHeader << "\n";
  os << std::setprecision(12);
  for (size_t p = 0; p < cmp.policies.size(); ++p) {
    std::int64_t crunched = 0;
    std::array<std::int64_t, 3> cr{0, 0, 0}, sv{0, 0, 0};
    double hops_sum = 0.0;
    std::int64_t hops_n = 0;
    double us_sum = 0.0;
    std::int64_t us_n = 0;
    for (const MetricsFrame& f : cmp.frames[p]) {
      crunched += f.total_crunched();
      auto c = f.crunched_by_class();
      auto s = f.served_crunched_by_class();
      for (size_t k = 0; k < 3; ++k) {
        cr[k] += c[k];
        sv[k] += s[k];
      }
      hops_sum += static_cast<double>(f.served_crunched_hops_sum);
      hops_n += f.served_crunched_count;
      us_sum += f.decision_us_sum;
      us_n += f.decision_count;
    }
    std::int64_t windows_total = 0;
    double window_bins = 0.0;
    for (const auto& ws : cmp.baseline_windows) {
      windows_total += static_cast<std::int64_t>(ws.size());
      for (const auto& w : ws) window_bins += w.bins();
    }
    double window_minutes_mean =
        windows_total == 0 ? 0.0
                           : window_bins * cmp.scenario.crunch_bin_s / 60.0 /
                                 static_cast<double>(windows_total);
    auto ratio = [](std::int64_t a, std::int64_t b) {
      return b == 0 ? 1.0 : static_cast<double>(a) / static_cast<double>(b);
    };
    os << 1 << ',' << cmp.policies[p].name << ',' << cmp.seeds.size() << ','
       << cmp.window_profit_mean(p) << ',' << cmp.window_profit_ci95(p) << ','
       << windows_total << ',' << window_minutes_mean << ',' << crunched << ','
       << ratio(sv[0], cr[0]) << ',' << ratio(sv[1], cr[1]) << ',' << ratio(sv[2], cr[2])
       << ',' << (hops_n ? hops_sum / static_cast<double>(hops_n) : 0.0) << ','
       << (us_n ? us_sum / static_cast<double>(us_n) : 0.0) << "\n";
  }
  return os.str();
}

inline std::string windows_csv(const Comparison& cmp) {
  std::ostringstream os;
  os << kWindowsCsvHeader << "\n";
  os << std::setprecision(12);
  const double total_cap = cmp.total_capacity_gbps;
  for (size_t s = 0; s < cmp.seeds.size(); ++s) {
    const MetricsFrame& f = cmp.frames[static_cast<size_t>(cmp.baseline_index)][s];
    int w_idx = 0;
    for (const CrunchWindow& w : cmp.baseline_windows[s]) {
      // Offered minimum-bandwidth load inside the daily window, pooled
      // over all measured days, relative to total installed capacity.
      double offered_min = 0.0;
      for (int d = 0; d < f.days; ++d) {
        size_t base = static_cast<size_t>(d) * static_cast<size_t>(f.bins_per_day);
        for (int b = w.begin_bin; b < w.end_bin; ++b) {
          offered_min += f.offered_min_gbps_s[base + static_cast<size_t>(b)];
        }
      }
      double window_s = w.bins() * cmp.scenario.crunch_bin_s * f.days;
      double ratio = total_cap > 0.0 && window_s > 0.0
                         ? offered_min / (window_s * total_cap)
                         : 0.0;
      os << 1 << ',' << cmp.seeds[s] << ',' << w_idx++ << ','
         << w.begin_bin * cmp.scenario.crunch_bin_s << ','
         << w.end_bin * cmp.scenario.crunch_bin_s << ',' << ratio << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Calibration.

struct CalibrationOptions {
  double target_peak_ratio = 0.05;
  double target_duration_s = 3600.0;
  double peak_tolerance = 0.01;       // +- 1 percentage point
  double duration_tolerance = 0.20;   // +- 20 %
  int probe_days = 20;
  int probe_warmup_days = 2;
  std::vector<std::uint64_t> probe_seeds = {1, 2};
  int max_outer_iterations = 9;
  int max_inner_iterations = 11;
};

struct CalibrationResult {
  ScenarioConfig config;
  double peak_ratio = 0.0;
  double duration_s = 0.0;
  std::vector<std::string> trace;
};

namespace detail {

struct ProfileStats {
  double peak = 0.0;
  double duration_s = 0.0;
};

inline ProfileStats measure_profile(const Topology& topo, ScenarioConfig probe,
                                    const CalibrationOptions& opt) {
  probe.days = opt.probe_days;
  probe.warmup_days = opt.probe_warmup_days;
  ApproachPolicy baseline = ApproachPolicy::parse("baseline");

  // Accumulate the daily profile (ratio of sums per bin of day) across
  // probe seeds.
  std::vector<std::int64_t> offered(static_cast<size_t>(probe.bins_per_day()), 0);
  std::vector<std::int64_t> crunched(static_cast<size_t>(probe.bins_per_day()), 0);
  std::vector<MetricsFrame> frames(opt.probe_seeds.size());
  std::atomic<size_t> next{0};
  int workers = worker_threads_from_env(static_cast<int>(opt.probe_seeds.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= opt.probe_seeds.size()) return;
        frames[i] = run_simulation(topo, probe, baseline, opt.probe_seeds[i]);
      }
    });
  }
  for (auto& th : pool) th.join();

  for (const MetricsFrame& f : frames) {
    for (int d = 0; d < f.days; ++d) {
      for (int b = 0; b < f.bins_per_day; ++b) {
        size_t i = static_cast<size_t>(d) * static_cast<size_t>(f.bins_per_day) +
                   static_cast<size_t>(b);
        offered[static_cast<size_t>(b)] += f.offered[i];
        crunched[static_cast<size_t>(b)] += f.crunched[i];
      }
    }
  }

  ProfileStats out;
  int run = 0, best_run = 0;
  for (size_t b = 0; b < offered.size(); ++b) {
    double ratio = offered[b] == 0 ? 0.0
                                   : static_cast<double>(crunched[b]) /
                                         static_cast<double>(offered[b]);
    out.peak = std::max(out.peak, ratio);
    if (ratio > probe.crunch_threshold) {
      ++run;
      best_run = std::max(best_run, run);
    } else {
      run = 0;
    }
  }
  out.duration_s = best_run * probe.crunch_bin_s;
  return out;
}

}  // namespace detail

/// Searches (base rate, amplitude) until the baseline policy sees the
/// requested peak crunched-request ratio and above-threshold duration.
/// Inner loop: bisect the base rate for the peak at fixed amplitude.
/// Outer loop: bisect the amplitude for the duration. Throws with the
/// trace attached when it fails to converge.
inline CalibrationResult calibrate(const Topology& topo, const ScenarioConfig& tmpl,
                                   const CalibrationOptions& opt) {
  if (opt.target_peak_ratio <= 0.0 || opt.target_peak_ratio >= 1.0) {
    throw std::invalid_argument("target peak ratio must lie in (0, 1)");
  }
  CalibrationResult result;
  ScenarioConfig cfg = tmpl;
  double a_lo = 0.05, a_hi = 0.995;
  double amplitude = cfg.sin_amplitude > 0.0 ? cfg.sin_amplitude : 0.5;

  auto log = [&result](const std::string& line) { result.trace.push_back(line); };

  detail::ProfileStats stats;
  for (int outer = 0; outer < opt.max_outer_iterations; ++outer) {
    cfg.sin_amplitude = amplitude;

    // Bracket the base rate for the requested peak, then bisect.
    double lo = 0.0;
    double hi = cfg.lambda_base_per_s > 0.0 ? cfg.lambda_base_per_s : 0.05;
    detail::ProfileStats hi_stats;
    for (int grow = 0; grow < 14; ++grow) {
      cfg.lambda_base_per_s = hi;
      hi_stats = detail::measure_profile(topo, cfg, opt);
      std::ostringstream line;
      line << "bracket amplitude=" << amplitude << " base=" << hi
           << " peak=" << hi_stats.peak << " duration_s=" << hi_stats.duration_s;
      log(line.str());
      if (hi_stats.peak >= opt.target_peak_ratio) break;
      lo = hi;
      hi *= 2.0;
    }
    if (hi_stats.peak < opt.target_peak_ratio) {
      throw std::runtime_error("calibration could not reach the target peak ratio");
    }
    // Bisect the base rate; keep the upper end so the final peak sits at or
    // just above the target.
    for (int inner = 0; inner < opt.max_inner_iterations &&
                        std::abs(hi_stats.peak - opt.target_peak_ratio) >
                            opt.peak_tolerance / 2;
         ++inner) {
      double mid = (lo + hi) / 2.0;
      cfg.lambda_base_per_s = mid;
      detail::ProfileStats mid_stats = detail::measure_profile(topo, cfg, opt);
      std::ostringstream line;
      line << "bisect amplitude=" << amplitude << " base=" << mid
           << " peak=" << mid_stats.peak << " duration_s=" << mid_stats.duration_s;
      log(line.str());
      if (mid_stats.peak >= opt.target_peak_ratio) {
        hi = mid;
        hi_stats = mid_stats;
      } else {
        lo = mid;
      }
    }
    cfg.lambda_base_per_s = hi;
    stats = hi_stats;

    double dur_err = (stats.duration_s - opt.target_duration_s) / opt.target_duration_s;
    std::ostringstream line;
    line << "outer amplitude=" << amplitude << " base=" << cfg.lambda_base_per_s
         << " peak=" << stats.peak << " duration_s=" << stats.duration_s;
    log(line.str());
    if (std::abs(stats.peak - opt.target_peak_ratio) <= opt.peak_tolerance &&
        std::abs(dur_err) <= opt.duration_tolerance) {
      result.config = cfg;
      result.peak_ratio = stats.peak;
      result.duration_s = stats.duration_s;
      return result;
    }
    // Sharper swing (larger amplitude at a refitted base) narrows the
    // above-threshold window.
    if (stats.duration_s > opt.target_duration_s) {
      a_lo = amplitude;
    } else {
      a_hi = amplitude;
    }
    amplitude = (a_lo + a_hi) / 2.0;
  }

  std::string msg = "calibration did not converge;";
  for (const auto& l : result.trace) msg += "\n  " + l;
  throw std::runtime_error(msg);
}

}  // namespace crunch
