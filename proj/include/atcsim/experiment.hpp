#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atcsim/metrics.hpp"
#include "atcsim/scenario.hpp"

namespace atcsim {

// One run's outputs. A run that threw carries the error text instead of a
// log; it still occupies its slot so seeds and results stay aligned.
struct RunArtifacts {
  uint64_t seed = 0;
  RunMetrics metrics;
  std::string log_text;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct ExperimentResult {
  std::vector<RunArtifacts> runs;          // one per requested seed, in order
  std::optional<AggregateMetrics> agg;     // over the successful runs
};

RunArtifacts run_one(const ScenarioFile& scenario, uint64_t seed);

// Runs the scenario once per seed, sharded across up to `jobs` threads.
// Results are ordered by the seeds vector regardless of thread scheduling.
ExperimentResult run_experiment(const ScenarioFile& scenario,
                                const std::vector<uint64_t>& seeds, int jobs);

// Writes seed_<n>/events.log and seed_<n>/metrics.json per run, plus
// aggregate.json and aggregate.txt, under out_dir (created if needed).
void write_artifacts(const ExperimentResult& result, const std::string& out_dir);

}  // namespace atcsim
