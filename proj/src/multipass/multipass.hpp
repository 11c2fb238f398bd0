#pragma once

#include "multipass/cohorts.hpp"
#include "planner/planner.hpp"

namespace agiplan {

// An idle interval of one satellite's plan, with the boundary pointing angles
// and the conservative energy budget available for insertions.
struct PlanGap {
  int satId = 0;
  Tick start = 0;       // first tick available for insertions
  Tick end = 0;         // insertions plus exit slew must finish by here
  int entryAngle = -1;  // -1 = no pointing commitment at gap start
  int exitAngle = -1;   // -1 = horizon-end gap
  double energyBudget = 0.0;
};

std::vector<PlanGap> findGaps(const Scenario& scenario,
                              const std::vector<PlannedCommand>& images);

// First pass: only choices covering at least one rainy GP, rainy rewards only.
PlanResult planPassOne(const Scenario& scenario, const PlannerConfig& config,
                       const CohortPartition& cohorts);

// Inserts cohort observations into the base plan's idle gaps under boundary
// slew constraints and a whole-plan energy re-validation.
PlanResult backfillGaps(const Scenario& scenario, const PlannerConfig& config,
                        const PlanResult& base, const std::set<GpId>& cohort,
                        int passIndex);

PlanResult planMultiPass(const Scenario& scenario, const PlannerConfig& config);

// Dispatches on config.passes.
PlanResult planMission(const Scenario& scenario, const PlannerConfig& config);

}  // namespace agiplan
