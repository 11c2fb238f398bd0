#pragma once

#include <stdexcept>

#include "engine/engine.hpp"
#include "planner/search_state.hpp"

namespace agiplan {

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Metrics {
  double planScore = 0.0;
  std::size_t gpObserved = 0;
  double avgErrPerObservedGP = 0.0;
  std::size_t imageCount = 0;
  std::size_t nodesCreated = 0;
  bool truncated = false;
  double wallTimeMs = 0.0;  // reported separately, never written to metrics CSV
};

struct RunOutcome {
  SearchState state;
  bool complete = false;
  bool truncated = false;
  std::size_t nodesCreated = 0;
};

// One PlanIt() run over the context's variable set.
RunOutcome runSearch(const RunContext& ctx);

struct PlanResult {
  Plan plan;
  std::unordered_map<GpId, double> observed;  // gp -> post-observation error
  Metrics metrics;
  bool complete = false;
};

// Single-pass planning over the whole scenario. Throws PlanError when the
// initial charge is already below the minimum.
PlanResult runSinglePass(const Scenario& scenario, const PlannerConfig& config);

Plan planFromState(const SearchState& state);
Metrics metricsFromResult(const PlanResult& result);

}  // namespace agiplan
