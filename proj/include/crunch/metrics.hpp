#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "crunch/scenario.hpp"

namespace crunch {

struct CrunchWindow {
  int begin_bin = 0;  // half-open bin range within the measured period
  int end_bin = 0;

  int bins() const { return end_bin - begin_bin; }
};

/// Per-replication results: fine-grained per-bin accumulators over the
/// measured days (warm-up excluded) plus per-day class counters and run
/// totals. Wall-clock timing lives here too but is excluded from the
/// determinism comparison.
struct MetricsFrame {
  int days = 0;
  int bins_per_day = 0;
  double bin_s = 0.0;

  std::vector<double> revenue;               // $ accrued per bin
  std::vector<double> blocking_cost;         // $ paid per bin
  std::vector<double> offered_min_gbps_s;    // sum of b_min * E[hold] per bin
  std::vector<std::int64_t> offered;         // arrivals per bin
  std::vector<std::int64_t> crunched;        // crunched arrivals per bin

  std::vector<std::array<std::int64_t, 3>> day_crunched_by_class;
  std::vector<std::array<std::int64_t, 3>> day_served_crunched_by_class;

  std::int64_t served_crunched_count = 0;
  std::int64_t served_crunched_hops_sum = 0;

  double decision_us_sum = 0.0;
  std::int64_t decision_count = 0;

  void init(const ScenarioConfig& sc) {
    days = sc.days;
    bins_per_day = sc.bins_per_day();
    bin_s = sc.crunch_bin_s;
    size_t total = static_cast<size_t>(days) * static_cast<size_t>(bins_per_day);
    revenue.assign(total, 0.0);
    blocking_cost.assign(total, 0.0);
    offered_min_gbps_s.assign(total, 0.0);
    offered.assign(total, 0);
    crunched.assign(total, 0);
    day_crunched_by_class.assign(static_cast<size_t>(days), {0, 0, 0});
    day_served_crunched_by_class.assign(static_cast<size_t>(days), {0, 0, 0});
  }

  int total_bins() const { return days * bins_per_day; }

  double day_revenue(int day) const { return day_sum(revenue, day); }
  double day_blocking(int day) const { return day_sum(blocking_cost, day); }
  double day_profit(int day) const { return day_revenue(day) - day_blocking(day); }

  std::int64_t day_offered(int day) const { return day_sum(offered, day); }
  std::int64_t day_crunched(int day) const { return day_sum(crunched, day); }

  double total_revenue() const { return sum(revenue); }
  double total_blocking() const { return sum(blocking_cost); }
  double profit() const { return total_revenue() - total_blocking(); }

  std::int64_t total_crunched() const {
    std::int64_t n = 0;
    for (auto v : crunched) n += v;
    return n;
  }

  std::array<std::int64_t, 3> crunched_by_class() const {
    return total_by_class(day_crunched_by_class);
  }
  std::array<std::int64_t, 3> served_crunched_by_class() const {
    return total_by_class(day_served_crunched_by_class);
  }

  double acceptance_ratio(size_t cls) const {
    auto c = crunched_by_class();
    auto s = served_crunched_by_class();
    return c[cls] == 0 ? 1.0 : static_cast<double>(s[cls]) / static_cast<double>(c[cls]);
  }

  double mean_decision_us() const {
    return decision_count == 0 ? 0.0 : decision_us_sum / static_cast<double>(decision_count);
  }

  double mean_served_hops() const {
    return served_crunched_count == 0
               ? 0.0
               : static_cast<double>(served_crunched_hops_sum) /
                     static_cast<double>(served_crunched_count);
  }

  /// Offered/crunched counts per bin of day, summed across all measured
  /// days.
  void daily_bins(std::vector<std::int64_t>* offered_out,
                  std::vector<std::int64_t>* crunched_out) const {
    offered_out->assign(static_cast<size_t>(bins_per_day), 0);
    crunched_out->assign(static_cast<size_t>(bins_per_day), 0);
    for (int d = 0; d < days; ++d) {
      for (int b = 0; b < bins_per_day; ++b) {
        size_t i = static_cast<size_t>(d) * static_cast<size_t>(bins_per_day) +
                   static_cast<size_t>(b);
        (*offered_out)[static_cast<size_t>(b)] += offered[i];
        (*crunched_out)[static_cast<size_t>(b)] += crunched[i];
      }
    }
  }

  /// Average crunched-request ratio per bin of day, across all measured
  /// days (ratio of sums, so light bins do not dominate).
  std::vector<double> daily_crunch_profile() const {
    std::vector<std::int64_t> off, cr;
    daily_bins(&off, &cr);
    std::vector<double> profile(static_cast<size_t>(bins_per_day), 0.0);
    for (int b = 0; b < bins_per_day; ++b) {
      size_t i = static_cast<size_t>(b);
      profile[i] = off[i] == 0 ? 0.0
                               : static_cast<double>(cr[i]) / static_cast<double>(off[i]);
    }
    return profile;
  }

  /// Everything except wall-clock timing.
  bool deterministic_equals(const MetricsFrame& o) const {
    return days == o.days && bins_per_day == o.bins_per_day && bin_s == o.bin_s &&
           revenue == o.revenue && blocking_cost == o.blocking_cost &&
           offered_min_gbps_s == o.offered_min_gbps_s && offered == o.offered &&
           crunched == o.crunched && day_crunched_by_class == o.day_crunched_by_class &&
           day_served_crunched_by_class == o.day_served_crunched_by_class &&
           served_crunched_count == o.served_crunched_count &&
           served_crunched_hops_sum == o.served_crunched_hops_sum;
  }

 private:
  template <typename T>
  T day_sum(const std::vector<T>& v, int day) const {
    T acc{};
    for (int b = 0; b < bins_per_day; ++b) {
      acc += v[static_cast<size_t>(day) * static_cast<size_t>(bins_per_day) +
               static_cast<size_t>(b)];
    }
    return acc;
  }

  template <typename T>
  T sum(const std::vector<T>& v) const {
    T acc{};
    for (const auto& x : v) acc += x;
    return acc;
  }

  static std::array<std::int64_t, 3> total_by_class(
      const std::vector<std::array<std::int64_t, 3>>& per_day) {
    std::array<std::int64_t, 3> out{0, 0, 0};
    for (const auto& d : per_day) {
      for (size_t c = 0; c < 3; ++c) out[c] += d[c];
    }
    return out;
  }
};

/// Maximal runs of bins whose crunched-request ratio exceeds the
/// threshold, over any offered/crunched bin series.
inline std::vector<CrunchWindow> detect_crunch_windows(
    const std::vector<std::int64_t>& offered, const std::vector<std::int64_t>& crunched,
    double threshold) {
  std::vector<CrunchWindow> out;
  int begin = -1;
  int n = static_cast<int>(offered.size());
  for (int b = 0; b < n; ++b) {
    size_t i = static_cast<size_t>(b);
    bool hot = offered[i] > 0 && static_cast<double>(crunched[i]) >
                                     threshold * static_cast<double>(offered[i]);
    if (hot && begin < 0) begin = b;
    if (!hot && begin >= 0) {
      out.push_back({begin, b});
      begin = -1;
    }
  }
  if (begin >= 0) out.push_back({begin, n});
  return out;
}

/// Windows over the daily crunch profile (bins of day, all days pooled).
/// This is the recurring daily overload period the run experiences.
inline std::vector<CrunchWindow> daily_crunch_windows(const MetricsFrame& frame,
                                                      double threshold) {
  std::vector<std::int64_t> off, cr;
  frame.daily_bins(&off, &cr);
  return detect_crunch_windows(off, cr, threshold);
}

/// Profit of this frame inside the given bins-of-day windows, summed over
/// every measured day.
inline double profit_in_daily_windows(const MetricsFrame& frame,
                                      const std::vector<CrunchWindow>& windows) {
  double p = 0.0;
  for (int d = 0; d < frame.days; ++d) {
    size_t base = static_cast<size_t>(d) * static_cast<size_t>(frame.bins_per_day);
    for (const CrunchWindow& w : windows) {
      for (int b = w.begin_bin; b < w.end_bin && b < frame.bins_per_day; ++b) {
        size_t i = base + static_cast<size_t>(b);
        p += frame.revenue[i] - frame.blocking_cost[i];
      }
    }
  }
  return p;
}

}  // namespace crunch
