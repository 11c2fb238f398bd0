#pragma once

#include <filesystem>
#include <vector>

#include "io/plan_io.hpp"
#include "multipass/multipass.hpp"

namespace agiplan {

struct ExperimentConfig {
  std::vector<Heuristic> heuristics = {Heuristic::errReduction,
                                       Heuristic::gpRankedChoice,
                                       Heuristic::gpCount};
  std::vector<std::size_t> objectiveBeamWidths = {1, 3, 5};
  std::vector<std::size_t> dfsBeamWidths = {5};
  PlannerConfig base;  // heuristic/global/beamWidth overridden per cell
};

// Full sweep: every heuristic at every beam width under the objective
// strategy, then every heuristic at the DFS beam widths. Rows are appended to
// csvPath when it is non-empty.
std::vector<MetricsRow> runExperiment(const Scenario& scenario,
                                      const ExperimentConfig& config,
                                      const std::filesystem::path& csvPath);

}  // namespace agiplan
