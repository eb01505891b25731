#include "atcsim/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <thread>

#include "atcsim/engine.hpp"

namespace atcsim {

RunArtifacts run_one(const ScenarioFile& scenario, uint64_t seed) {
  RunArtifacts out;
  out.seed = seed;
  try {
    Engine engine(scenario, seed);
    engine.run();
    out.log_text = engine.log().text();
    out.metrics = compute_metrics(engine.log().events());
  } catch (const std::exception& e) {
    out.error = e.what();  // SimError text already carries its code name
  }
  return out;
}

ExperimentResult run_experiment(const ScenarioFile& scenario,
                                const std::vector<uint64_t>& seeds, int jobs) {
  ExperimentResult result;
  result.runs.resize(seeds.size());
  unsigned hw = std::thread::hardware_concurrency();
  int workers = jobs > 0 ? jobs : static_cast<int>(hw > 0 ? hw : 2);
  workers = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));

  auto shard = [&](int offset) {
    for (size_t i = static_cast<size_t>(offset); i < seeds.size();
         i += static_cast<size_t>(workers)) {
      result.runs[i] = run_one(scenario, seeds[i]);
    }
  };
  if (workers == 1) {
    shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(shard, w);
    for (std::thread& th : pool) th.join();
  }

  std::vector<RunMetrics> good;
  for (const RunArtifacts& r : result.runs) {
    if (r.ok()) good.push_back(r.metrics);
  }
  if (!good.empty()) result.agg = aggregate(good);
  return result;
}

void write_artifacts(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const RunArtifacts& r : result.runs) {
    fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(r.seed));
    fs::create_directories(dir);
    if (!r.ok()) {
      std::ofstream(dir / "error.txt") << r.error << "\n";
      continue;
    }
    std::ofstream(dir / "events.log") << r.log_text;
    std::ofstream(dir / "metrics.json") << metrics_json(r.metrics).dump(2)
                                        << "\n";
  }
  if (result.agg) {
    std::ofstream(fs::path(out_dir) / "aggregate.json")
        << aggregate_json(*result.agg).dump(2) << "\n";
    std::ofstream(fs::path(out_dir) / "aggregate.txt")
        << aggregate_text(*result.agg);
  }
}

}  // namespace atcsim
