#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "crunch/pricing.hpp"

namespace crunch {

/// One simulated workload: a sinusoidally modulated Poisson arrival
/// process on a uniform-capacity network, exponential holding times, and
/// the crunch-detection parameters.
struct ScenarioConfig {
  std::string name = "scenario";
  double link_capacity_gbps = 100.0;
  double day_length_s = 86400.0;
  double mean_holding_s = 1800.0;
  double lambda_base_per_s = 0.1;
  /// Relative swing of the daily arrival-rate sinusoid, in [0, 1).
  double sin_amplitude = 0.5;
  /// Phase chosen so the rate peaks mid-day.
  double sin_phase_rad = -std::numbers::pi / 2.0;
  int days = 100;
  int warmup_days = 5;
  double crunch_bin_s = 300.0;
  double crunch_threshold = 0.02;
  TrafficMix mix = TrafficMix::defaults();

  double lambda(double t) const {
    return lambda_base_per_s *
           (1.0 + sin_amplitude *
                      std::sin(2.0 * std::numbers::pi * t / day_length_s + sin_phase_rad));
  }

  double lambda_max() const { return lambda_base_per_s * (1.0 + sin_amplitude); }

  int bins_per_day() const {
    return static_cast<int>(std::llround(day_length_s / crunch_bin_s));
  }

  void validate() const {
    if (sin_amplitude < 0.0 || sin_amplitude >= 1.0) {
      throw std::invalid_argument("sin_amplitude must lie in [0, 1)");
    }
    if (lambda_base_per_s < 0.0) throw std::invalid_argument("negative arrival rate");
    if (days < 1 || warmup_days < 0) throw std::invalid_argument("bad day counts");
    if (crunch_bin_s <= 0 || day_length_s <= 0 || mean_holding_s <= 0) {
      throw std::invalid_argument("nonpositive time parameter");
    }
    mix.validate();
  }

  static ScenarioConfig from_json(const nlohmann::json& j) {
    ScenarioConfig s;
    s.name = j.value("name", s.name);
    s.link_capacity_gbps = j.value("link_capacity_gbps", s.link_capacity_gbps);
    s.day_length_s = j.value("day_length_s", s.day_length_s);
    s.mean_holding_s = j.value("mean_holding_s", s.mean_holding_s);
    s.lambda_base_per_s = j.value("lambda_base_per_s", s.lambda_base_per_s);
    s.sin_amplitude = j.value("sin_amplitude", s.sin_amplitude);
    s.sin_phase_rad = j.value("sin_phase_rad", s.sin_phase_rad);
    s.days = j.value("days", s.days);
    s.warmup_days = j.value("warmup_days", s.warmup_days);
    s.crunch_bin_s = j.value("crunch_bin_s", s.crunch_bin_s);
    s.crunch_threshold = j.value("crunch_threshold", s.crunch_threshold);
    if (j.contains("traffic_mix")) s.mix = TrafficMix::from_json(j.at("traffic_mix"));
    s.validate();
    return s;
  }

  nlohmann::json to_json() const {
    return {{"name", name},
            {"link_capacity_gbps", link_capacity_gbps},
            {"day_length_s", day_length_s},
            {"mean_holding_s", mean_holding_s},
            {"lambda_base_per_s", lambda_base_per_s},
            {"sin_amplitude", sin_amplitude},
            {"sin_phase_rad", sin_phase_rad},
            {"days", days},
            {"warmup_days", warmup_days},
            {"crunch_bin_s", crunch_bin_s},
            {"crunch_threshold", crunch_threshold},
            {"traffic_mix", mix.to_json()}};
  }

  static ScenarioConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

}  // namespace crunch
