#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crunch/example_network.hpp"
#include "crunch/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (!token.empty()) seeds.push_back(std::stoull(token));
  }
  return seeds;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

int cmd_example() {
  using crunch::DecisionRecord;
  crunch::ExampleReport report = crunch::run_example();

  std::printf("demo request A->F: b_req 10 Gbps, b_min 5 Gbps, rate $6/Gbps, blocking fine $15\n");
  auto line = [](const char* name, const DecisionRecord& rec) {
    if (rec.outcome == DecisionRecord::Outcome::kBlocked) {
      std::printf("%-15s cheapest set costs $%.2f -> blocked, fine $%.2f paid\n", name,
                  rec.degradation_cost, rec.blocking_cost_paid);
    } else {
      std::printf("%-15s cost $%.2f -> served\n", name, rec.degradation_cost);
    }
  };
  line("sp-k1:", report.sp_k1.record);
  line("lp-k1:", report.lp_k1.record);

  const DecisionRecord& prov = report.provisioner.record;
  std::printf("provisioner-k1:");
  for (const auto& m : prov.degraded) {
    std::printf(" degrade c%llu by %g Gbps,", static_cast<unsigned long long>(m.id),
                m.shed.gbps());
  }
  crunch::NetworkState state = crunch::make_example_state();
  std::printf(" cost $%.2f, serve 5 Gbps via %s\n", prov.degradation_cost,
              prov.allocated_path ? prov.allocated_path->to_string(state.topology()).c_str()
                                  : "(none)");

  const crunch::CandidateSet& req_side = report.requested_side_candidate;
  std::printf("requested-bandwidth side:");
  for (const auto& m : req_side.members) {
    std::printf(" {c%llu -%g}", static_cast<unsigned long long>(m.id), m.shed.gbps());
  }
  std::printf(" costs $%.2f; %.0f/10 > %.0f/5 picks the minimum side\n", req_side.cost,
              req_side.cost, prov.degradation_cost);

  std::printf("cost-weighted path diagnostic: %s costs $%.2f\n",
              report.weighted_diagnostic.path.to_string(state.topology()).c_str(),
              report.weighted_diagnostic.charge_once_cost);

  bool golden = report.sp_k1.record.degradation_cost == 50.0 &&
                report.lp_k1.record.degradation_cost == 50.0 &&
                prov.degradation_cost == 15.0 &&
                report.weighted_diagnostic.charge_once_cost == 35.0;
  if (!golden) {
    std::fprintf(stderr, "demo outcome deviates from the expected values\n");
    return 1;
  }
  return 0;
}

int cmd_run(const std::string& manifest_path, const std::string& seeds_csv,
            const std::string& out_override, bool decision_log) {
  json manifest = load_json(manifest_path);
  fs::path base = fs::path(manifest_path).parent_path();
  auto resolve = [&base](const std::string& p) {
    fs::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  crunch::Topology topology =
      crunch::Topology::load(resolve(manifest.at("topology").get<std::string>()).string());
  crunch::ScenarioConfig scenario =
      crunch::ScenarioConfig::load(resolve(manifest.at("scenario").get<std::string>()).string());

  std::vector<crunch::ApproachPolicy> policies;
  for (const auto& name : manifest.at("policies")) {
    policies.push_back(crunch::ApproachPolicy::parse(name.get<std::string>()));
  }

  std::vector<std::uint64_t> seeds;
  if (!seeds_csv.empty()) {
    seeds = parse_seed_list(seeds_csv);
  } else if (manifest.contains("seeds")) {
    for (const auto& s : manifest.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
  }
  if (seeds.empty()) throw std::runtime_error("no seeds given (manifest or --seeds)");

  fs::path out_dir = !out_override.empty()
                         ? fs::path(out_override)
                         : resolve(manifest.value("out_dir", std::string("out")));
  fs::create_directories(out_dir);

  std::printf("running %zu policies x %zu seeds on '%s' (%d days + %d warm-up)...\n",
              policies.size(), seeds.size(), scenario.name.c_str(), scenario.days,
              scenario.warmup_days);
  crunch::Comparison cmp = crunch::compare(topology, scenario, policies, seeds);

  write_file(out_dir / "daily.csv", crunch::daily_csv(cmp));
  write_file(out_dir / "summary.csv", crunch::summary_csv(cmp));
  write_file(out_dir / "windows.csv", crunch::windows_csv(cmp));

  if (decision_log) {
    for (size_t p = 0; p < policies.size(); ++p) {
      for (size_t s = 0; s < seeds.size(); ++s) {
        std::ostringstream name;
        name << "decisions-" << policies[p].name << "-seed" << seeds[s] << ".jsonl";
        std::ofstream log(out_dir / name.str());
        crunch::run_simulation(topology, scenario, policies[p], seeds[s],
                               [&](double t, const crunch::DecisionRecord& rec) {
                                 json j = rec.to_json(topology);
                                 j["time_s"] = t;
                                 log << j.dump() << "\n";
                               });
      }
    }
  }

  std::printf("policy                 window profit $ (mean +- ci95)   bg-accept  decision us\n");
  for (size_t p = 0; p < policies.size(); ++p) {
    std::array<std::int64_t, 3> cr{0, 0, 0}, sv{0, 0, 0};
    double us = 0.0;
    std::int64_t n = 0;
    for (const auto& f : cmp.frames[p]) {
      auto c = f.crunched_by_class();
      auto s2 = f.served_crunched_by_class();
      for (size_t k = 0; k < 3; ++k) {
        cr[k] += c[k];
        sv[k] += s2[k];
      }
      us += f.decision_us_sum;
      n += f.decision_count;
    }
    double bg = cr[2] ? double(sv[2]) / double(cr[2]) : 1.0;
    std::printf("%-22s %12.2f +- %-12.2f  %8.3f  %10.1f\n", policies[p].name.c_str(),
                cmp.window_profit_mean(p), cmp.window_profit_ci95(p), bg,
                n ? us / double(n) : 0.0);
  }
  std::printf("wrote %s\n", (out_dir / "summary.csv").string().c_str());
  return 0;
}

int cmd_calibrate(const std::string& topology_path, const std::string& template_path,
                  double peak_pct, double duration_min, double capacity_gbps,
                  int probe_days, const std::string& probe_seeds_csv,
                  const std::string& out_path) {
  crunch::Topology topology = crunch::Topology::load(topology_path);
  crunch::ScenarioConfig tmpl;
  if (!template_path.empty()) tmpl = crunch::ScenarioConfig::load(template_path);
  if (capacity_gbps > 0) tmpl.link_capacity_gbps = capacity_gbps;

  crunch::CalibrationOptions opt;
  opt.target_peak_ratio = peak_pct / 100.0;
  opt.target_duration_s = duration_min * 60.0;
  if (probe_days > 0) opt.probe_days = probe_days;
  if (!probe_seeds_csv.empty()) opt.probe_seeds = parse_seed_list(probe_seeds_csv);

  crunch::CalibrationResult result = crunch::calibrate(topology, tmpl, opt);
  for (const auto& line : result.trace) std::printf("%s\n", line.c_str());
  std::printf("calibrated: base=%.6f /s amplitude=%.4f peak=%.3f%% duration=%.1f min\n",
              result.config.lambda_base_per_s, result.config.sin_amplitude,
              result.peak_ratio * 100.0, result.duration_s / 60.0);

  json out = result.config.to_json();
  json trace = json::array();
  for (const auto& line : result.trace) trace.push_back(line);
  out["calibration_trace"] = trace;
  out["calibration_peak_ratio"] = result.peak_ratio;
  out["calibration_duration_s"] = result.duration_s;
  write_file(out_path, out.dump(1) + "\n");
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_dump_cag(const std::string& state_path, const std::string& src,
                 const std::string& dst, const std::string& view_name, double bw_gbps,
                 const std::string& policy_name, double horizon_s) {
  crunch::NetworkState state = crunch::NetworkState::load(state_path);
  if (src == dst) throw std::runtime_error("source and destination must differ");
  crunch::NodeId s = state.topology().node(src);
  crunch::NodeId t = state.topology().node(dst);

  bool capacitated;
  if (view_name == "relaxed-min" || view_name == "relaxed-req") {
    capacitated = false;
  } else if (view_name == "cap-min" || view_name == "cap-req") {
    capacitated = true;
  } else {
    throw std::runtime_error("unknown view: " + view_name);
  }
  crunch::FreeWeightPolicy policy = policy_name == "mean-rate"
                                        ? crunch::FreeWeightPolicy::kMeanRate
                                        : crunch::FreeWeightPolicy::kZero;
  crunch::Cag cag(state, policy, horizon_s);
  crunch::CagView view{capacitated, crunch::Bandwidth::from_gbps(bw_gbps)};
  std::printf("%s", cag.to_dot(s, t, view).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crunch: profit-aware connection provisioning under capacity overload"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario comparison from a manifest");
  std::string manifest, seeds_csv, out_dir;
  bool decision_log = false;
  run->add_option("--manifest", manifest, "manifest json")->required();
  run->add_option("--seeds", seeds_csv, "comma-separated seed list (overrides manifest)");
  run->add_option("--out", out_dir, "output directory (overrides manifest)");
  run->add_flag("--decision-log", decision_log, "also write per-decision jsonl logs");

  auto* example = app.add_subcommand("example", "run the bundled demo decision");

  auto* calibrate = app.add_subcommand("calibrate", "search arrival parameters for a "
                                                    "target overload profile");
  std::string topo_path, template_path, probe_seeds, cal_out = "scenario.json";
  double peak_pct = 5.0, duration_min = 60.0, capacity = 0.0;
  int probe_days = 0;
  calibrate->add_option("--topology", topo_path, "topology json")->required();
  calibrate->add_option("--template", template_path, "scenario template json");
  calibrate->add_option("--peak", peak_pct, "target peak crunched-request percentage");
  calibrate->add_option("--duration", duration_min, "target overload duration, minutes");
  calibrate->add_option("--capacity", capacity, "uniform link capacity, Gbps");
  calibrate->add_option("--probe-days", probe_days, "days per probe run");
  calibrate->add_option("--probe-seeds", probe_seeds, "comma-separated probe seeds");
  calibrate->add_option("--out", cal_out, "output scenario json");

  auto* dump = app.add_subcommand("dump-cag", "export a connection-adjacency-graph view "
                                              "as DOT");
  std::string state_path, src, dst, view_name = "relaxed-min", policy_name = "zero";
  double bw = 1.0, horizon = 1.0;
  dump->add_option("--state", state_path, "network snapshot json")->required();
  dump->add_option("--src", src, "source node name")->required();
  dump->add_option("--dst", dst, "destination node name")->required();
  dump->add_option("--view", view_name, "relaxed-min|relaxed-req|cap-min|cap-req");
  dump->add_option("--bw", bw, "query bandwidth, Gbps");
  dump->add_option("--policy", policy_name, "free-link weight policy: zero|mean-rate");
  dump->add_option("--horizon", horizon, "pricing horizon, seconds");

  try {
    app.parse(argc, argv);
    if (example->parsed()) return cmd_example();
    if (run->parsed()) return cmd_run(manifest, seeds_csv, out_dir, decision_log);
    if (calibrate->parsed()) {
      return cmd_calibrate(topo_path, template_path, peak_pct, duration_min, capacity,
                           probe_days, probe_seeds, cal_out);
    }
    if (dump->parsed()) {
      return cmd_dump_cag(state_path, src, dst, view_name, bw, policy_name, horizon);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
