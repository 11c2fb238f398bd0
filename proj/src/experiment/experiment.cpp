#include "experiment/experiment.hpp"

#include <chrono>

namespace agiplan {

namespace {

MetricsRow runCell(const Scenario& scenario, PlannerConfig config,
                   Heuristic h, GlobalStrategy g, std::size_t beamWidth) {
  config.heuristic = h;
  config.global = g;
  config.beamWidth = beamWidth;

  const auto t0 = std::chrono::steady_clock::now();
  PlanResult result = planMission(scenario, config);
  const auto t1 = std::chrono::steady_clock::now();

  MetricsRow row;
  row.heuristic = toString(h);
  row.global = toString(g);
  row.beamWidth = beamWidth;
  row.passes = config.passes == PassMode::multi ? "multi" : "single";
  row.metrics = result.metrics;
  row.metrics.wallTimeMs =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

}  // namespace

std::vector<MetricsRow> runExperiment(const Scenario& scenario,
                                      const ExperimentConfig& config,
                                      const std::filesystem::path& csvPath) {
  std::vector<MetricsRow> rows;
  for (Heuristic h : config.heuristics)
    for (std::size_t b : config.objectiveBeamWidths)
      rows.push_back(
          runCell(scenario, config.base, h, GlobalStrategy::objective, b));
  for (Heuristic h : config.heuristics)
    for (std::size_t b : config.dfsBeamWidths)
      rows.push_back(runCell(scenario, config.base, h, GlobalStrategy::dfs, b));

  if (!csvPath.empty())
    for (const MetricsRow& row : rows) appendMetricsCsv(csvPath, row);
  return rows;
}

}  // namespace agiplan
