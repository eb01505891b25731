#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atcsim/disturbance.hpp"
#include "atcsim/engine.hpp"
#include "atcsim/errors.hpp"
#include "atcsim/event_log.hpp"
#include "atcsim/experiment.hpp"
#include "atcsim/metrics.hpp"
#include "atcsim/scenario.hpp"

namespace {

using namespace atcsim;

int load_scenario_or_report(const std::string& ref, ScenarioFile& out) {
  std::string text;
  try {
    text = load_scenario_text(ref);
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  ParseOutcome parsed = parse_scenario(text);
  if (!parsed.ok()) {
    for (const std::string& err : parsed.errors) std::cerr << err << "\n";
    return 1;
  }
  out = std::move(*parsed.scenario);
  return 0;
}

void print_metrics_text(const RunMetrics& m) {
  std::printf("scenario    %s (%s)\n", m.name.c_str(), m.scenario.c_str());
  std::printf("seed        %llu   duration %.2f hr\n",
              static_cast<unsigned long long>(m.seed), m.duration_hr);
  std::printf("movements   %.2f /hr  (landings %.2f, takeoffs %.2f)\n",
              m.movements_per_hr, m.landings_per_hr, m.takeoffs_per_hr);
  std::printf("arrivals    %lld entered, %lld landed, %lld diverted\n",
              static_cast<long long>(m.arrivals_entered),
              static_cast<long long>(m.landings),
              static_cast<long long>(m.diversions));
  std::printf("disturbed   %d flights, handled fraction %.4f (all: %.4f)\n",
              m.disturbed_flights, m.handled_fraction, m.handled_fraction_all);
  std::printf("events      %lld raised, %lld resolved, %lld escalated\n",
              static_cast<long long>(m.disturbances_raised),
              static_cast<long long>(m.disturbances_resolved),
              static_cast<long long>(m.escalations));
  std::printf("holding     %.1f s mean over %d episodes\n",
              m.mean_holding_time_s, m.holding_episodes);
  std::printf("supervision %lld failovers, %lld failbacks, %lld gaps\n",
              static_cast<long long>(m.failovers),
              static_cast<long long>(m.failbacks),
              static_cast<long long>(m.supervision_gaps));
  std::printf("faults      %lld\n", static_cast<long long>(m.faults));
}

int cmd_run(const std::string& scenario_ref, uint64_t seed,
            const std::string& out_dir, bool strict, const std::string& format) {
  ScenarioFile sc;
  if (int rc = load_scenario_or_report(scenario_ref, sc)) return rc;
  if (strict) sc.strict_mode = true;
  try {
    Engine engine(sc, seed);
    engine.run();
    RunMetrics m = compute_metrics(engine.log().events());
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / "events.log")
          << engine.log().text();
      std::ofstream(std::filesystem::path(out_dir) / "metrics.json")
          << metrics_json(m).dump(2) << "\n";
    }
    if (format == "json") {
      std::cout << metrics_json(m).dump(2) << "\n";
    } else {
      print_metrics_text(m);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_experiment(const std::string& scenario_ref, std::vector<uint64_t> seeds,
                   int runs, uint64_t seed_base, int jobs,
                   const std::string& out_dir, const std::string& format) {
  ScenarioFile sc;
  if (int rc = load_scenario_or_report(scenario_ref, sc)) return rc;
  if (seeds.empty()) {
    if (runs < 1) {
      std::cerr << "need --seeds or a positive --runs\n";
      return 1;
    }
    for (int i = 0; i < runs; ++i) {
      seeds.push_back(seed_base + static_cast<uint64_t>(i));
    }
  }
  ExperimentResult result = run_experiment(sc, seeds, jobs);
  if (!out_dir.empty()) write_artifacts(result, out_dir);
  int failed = 0;
  for (const RunArtifacts& r : result.runs) {
    if (!r.ok()) {
      std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
      failed += 1;
    }
  }
  if (result.agg) {
    if (format == "json") {
      std::cout << aggregate_json(*result.agg).dump(2) << "\n";
    } else {
      std::cout << aggregate_text(*result.agg);
    }
  }
  return failed == 0 ? 0 : 2;
}

int cmd_validate(const std::string& scenario_ref) {
  std::string text;
  try {
    text = load_scenario_text(scenario_ref);
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  ParseOutcome parsed = parse_scenario(text);
  if (!parsed.ok()) {
    for (const std::string& err : parsed.errors) std::cout << err << "\n";
    std::cout << parsed.errors.size() << " problem(s)\n";
    return 1;
  }
  std::cout << "ok: " << parsed.scenario->name << " "
            << scenario_hash(*parsed.scenario) << "\n";
  return 0;
}

int cmd_replay(const std::string& log_path, const std::string& format) {
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open " << log_path << "\n";
    return 1;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    std::vector<Event> events = parse_event_log(buf.str());
    RunMetrics m = compute_metrics(events);
    if (format == "json") {
      std::cout << metrics_json(m).dump(2) << "\n";
    } else {
      print_metrics_text(m);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_policy_table() {
  std::printf("%-18s %-12s %-9s %s\n", "cause", "policy", "p/minute",
              "eligible phases");
  CauseModel model;
  for (DisturbanceCause c : kAllCauses) {
    std::string phases;
    for (FlightPhase p : eligible_phases(c)) {
      if (!phases.empty()) phases += ", ";
      phases += to_string(p);
    }
    std::printf("%-18s %-12s %-9.4f %s\n", to_string(c),
                to_string(policy_for(c)), model.probability(c), phases.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"terminal-area multi-agent traffic simulator"};
  app.require_subcommand(1);

  std::string scenario_ref = "builtin:mumbai";
  uint64_t seed = 1;
  std::string out_dir;
  bool strict = false;
  std::string format = "text";
  std::vector<uint64_t> seeds;
  int runs = 0;
  uint64_t seed_base = 1;
  int jobs = 0;
  std::string log_path;

  CLI::App* run = app.add_subcommand("run", "simulate one (scenario, seed)");
  run->add_option("--scenario", scenario_ref,
                  "builtin:<name> or a scenario file path");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out-dir", out_dir, "write events.log and metrics.json here");
  run->add_flag("--strict", strict, "abort on any invariant violation");
  run->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* exp = app.add_subcommand("experiment", "one scenario, many seeds");
  exp->add_option("--scenario", scenario_ref,
                  "builtin:<name> or a scenario file path");
  exp->add_option("--seeds", seeds, "explicit seed list")->delimiter(',');
  exp->add_option("--runs", runs, "number of consecutive seeds");
  exp->add_option("--seed-base", seed_base, "first seed used with --runs");
  exp->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  exp->add_option("--out-dir", out_dir, "write per-seed artifacts here");
  exp->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* val = app.add_subcommand("validate", "check a scenario file");
  val->add_option("--scenario", scenario_ref,
                  "builtin:<name> or a scenario file path");

  CLI::App* rep = app.add_subcommand("replay", "recompute metrics from a log");
  rep->add_option("--log", log_path, "events.log produced by run")->required();
  rep->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* pol = app.add_subcommand(
      "policy-table", "print the cause/policy/eligibility table");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario_ref, seed, out_dir, strict, format);
  if (exp->parsed()) {
    return cmd_experiment(scenario_ref, seeds, runs, seed_base, jobs, out_dir,
                          format);
  }
  if (val->parsed()) return cmd_validate(scenario_ref);
  if (rep->parsed()) return cmd_replay(log_path, format);
  if (pol->parsed()) return cmd_policy_table();
  return 1;
}
