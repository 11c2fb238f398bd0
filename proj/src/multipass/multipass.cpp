#include "multipass/multipass.hpp"

#include <algorithm>

#include "audit/audit.hpp"
#include "constraints/constraints.hpp"

namespace agiplan {

namespace {

constexpr Tick kImageLock = 3;

struct SatSim {
  double charge;
  Tick lastEnd = 0;
  int lastAngle = -1;
};

double commandDebit(const Scenario& sc, const PlannedCommand& cmd,
                    int fromAngle) {
  double debit = sc.energy.imagingRate * kImageLock *
                 static_cast<double>(cmd.pairs.size());
  const int angle = cmd.pairs.front().angle;
  if (fromAngle >= 0 && fromAngle != angle)
    debit += sc.slew.lookup(fromAngle, angle).energy;
  return debit;
}

}  // namespace

std::vector<PlanGap> findGaps(const Scenario& scenario,
                              const std::vector<PlannedCommand>& images) {
  std::map<int, std::vector<const PlannedCommand*>> bySat;
  for (int satId : scenario.satIds) bySat[satId];
  for (const auto& cmd : images) bySat[cmd.satId].push_back(&cmd);
  for (auto& [satId, cmds] : bySat) {
    std::sort(cmds.begin(), cmds.end(),
              [](const PlannedCommand* a, const PlannedCommand* b) {
                return a->start < b->start;
              });
  }

  std::vector<PlanGap> gaps;
  for (const auto& [satId, cmds] : bySat) {
    // Worst-case future debits ignore solar recharge.
    std::vector<double> suffixDebit(cmds.size() + 1, 0.0);
    for (std::size_t i = cmds.size(); i-- > 0;) {
      int fromAngle = i == 0 ? -1 : cmds[i - 1]->pairs.front().angle;
      suffixDebit[i] =
          suffixDebit[i + 1] + commandDebit(scenario, *cmds[i], fromAngle);
    }

    SatSim sim{scenario.energy.initialCharge};
    for (std::size_t i = 0; i <= cmds.size(); ++i) {
      PlanGap gap;
      gap.satId = satId;
      gap.start = sim.lastEnd;
      gap.end = i < cmds.size() ? cmds[i]->start : scenario.horizon;
      gap.entryAngle = sim.lastAngle;
      gap.exitAngle = i < cmds.size() ? cmds[i]->pairs.front().angle : -1;
      gap.energyBudget =
          sim.charge - scenario.energy.minCharge - suffixDebit[i];
      if (gap.end > gap.start) gaps.push_back(gap);

      if (i == cmds.size()) break;
      const PlannedCommand& cmd = *cmds[i];
      sim.charge = std::min(
          1.0, sim.charge + scenario.energy.solarRate *
                                sunlitSeconds(scenario, satId, sim.lastEnd,
                                              cmd.start + kImageLock));
      sim.charge -= commandDebit(scenario, cmd, sim.lastAngle);
      sim.lastEnd = cmd.start + kImageLock;
      sim.lastAngle = cmd.pairs.front().angle;
    }
  }
  return gaps;
}

PlanResult planPassOne(const Scenario& scenario, const PlannerConfig& config,
                       const CohortPartition& cohorts) {
  RunContext ctx;
  ctx.scenario = &scenario;
  ctx.variables = &scenario.variables;
  ctx.config = config;
  ctx.cohortFilterEnabled = true;
  ctx.cohortFilter = cohorts.rainy;
  ctx.pass = 1;

  RunOutcome outcome = runSearch(ctx);
  PlanResult result;
  result.plan = planFromState(outcome.state);
  result.observed = outcome.state.observed;
  result.complete = outcome.complete;
  result.metrics = metricsFromResult(result);
  result.metrics.nodesCreated = outcome.nodesCreated;
  result.metrics.truncated = outcome.truncated;
  return result;
}

PlanResult backfillGaps(const Scenario& scenario, const PlannerConfig& config,
                        const PlanResult& base, const std::set<GpId>& cohort,
                        int passIndex) {
  PlanResult merged = base;

  std::vector<PlanGap> gaps = findGaps(scenario, merged.plan.commands);
  // Longest gaps first; ties resolved deterministically.
  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const PlanGap& a, const PlanGap& b) {
                     Tick la = a.end - a.start, lb = b.end - b.start;
                     if (la != lb) return la > lb;
                     return std::tie(a.satId, a.start) <
                            std::tie(b.satId, b.start);
                   });

  std::set<GpId> preObserved;
  for (const auto& [gp, err] : merged.observed) preObserved.insert(gp);

  for (const PlanGap& gap : gaps) {
    if (gap.energyBudget <= 0.0) continue;
    if (gap.end - gap.start < kImageLock) continue;

    std::vector<TimepointVariable> vars;
    for (const auto& tv : scenario.variables)
      if (tv.satId == gap.satId && tv.tick >= gap.start && tv.tick < gap.end)
        vars.push_back(tv);
    if (vars.empty()) continue;

    RunContext ctx;
    ctx.scenario = &scenario;
    ctx.variables = &vars;
    ctx.config = config;
    ctx.config.followupEnabled = false;
    ctx.cohortFilterEnabled = true;
    ctx.cohortFilter = cohort;
    ctx.preObserved = preObserved;
    ctx.ignoreSolar = true;
    ctx.pass = passIndex;
    RunContext::SatBoundary sb;
    sb.charge =
        std::min(1.0, scenario.energy.minCharge + gap.energyBudget);
    sb.lastEnd = gap.start;
    sb.lastAngle = gap.entryAngle;
    sb.exitAngle = gap.exitAngle;
    sb.endTick = gap.end;
    sb.hasExit = true;
    ctx.boundary[gap.satId] = sb;

    RunOutcome outcome = runSearch(ctx);
    if (outcome.state.steps.empty()) continue;

    // Chronological whole-plan energy re-validation with real solar input;
    // reject the gap's insertions if the floor is ever violated.
    std::vector<PlannedCommand> candidate = merged.plan.commands;
    candidate.insert(candidate.end(), outcome.state.steps.begin(),
                     outcome.state.steps.end());
    if (!validateEnergy(scenario, candidate)) continue;

    merged.plan.commands = std::move(candidate);
    merged.plan.planScore += outcome.state.score;
    for (const auto& [gp, err] : outcome.state.observed) {
      merged.observed.emplace(gp, err);
      preObserved.insert(gp);
    }
    merged.metrics.nodesCreated += outcome.nodesCreated;
    merged.metrics.truncated = merged.metrics.truncated || outcome.truncated;
  }

  std::stable_sort(merged.plan.commands.begin(), merged.plan.commands.end(),
                   [](const PlannedCommand& a, const PlannedCommand& b) {
                     return std::tie(a.satId, a.start) <
                            std::tie(b.satId, b.start);
                   });
  Metrics keep = merged.metrics;
  merged.metrics = metricsFromResult(merged);
  merged.metrics.nodesCreated = keep.nodesCreated;
  merged.metrics.truncated = keep.truncated;
  return merged;
}

PlanResult planMultiPass(const Scenario& scenario,
                         const PlannerConfig& config) {
  const CohortPartition cohorts =
      partitionCohorts(scenario.gps, scenario.rainEvents, scenario.saturated);
  PlanResult base = planPassOne(scenario, config, cohorts);
  PlanResult withNonRainy =
      backfillGaps(scenario, config, base, cohorts.nonRainy, 2);
  return backfillGaps(scenario, config, withNonRainy, cohorts.saturated, 3);
}

PlanResult planMission(const Scenario& scenario, const PlannerConfig& config) {
  if (scenario.energy.initialCharge < scenario.energy.minCharge)
    throw PlanError("initial charge below the minimum floor; no feasible plan");
  if (config.passes == PassMode::multi) return planMultiPass(scenario, config);
  return runSinglePass(scenario, config);
}

}  // namespace agiplan
