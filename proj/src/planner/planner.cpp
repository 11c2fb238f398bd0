#include "planner/planner.hpp"

#include <algorithm>

#include "constraints/constraints.hpp"
#include "heuristics/heuristics.hpp"

namespace agiplan {

std::optional<Heuristic> heuristicFromString(const std::string& s) {
  if (s == "err-reduction") return Heuristic::errReduction;
  if (s == "gp-ranked-choice") return Heuristic::gpRankedChoice;
  if (s == "gp-count") return Heuristic::gpCount;
  return std::nullopt;
}

std::optional<GlobalStrategy> strategyFromString(const std::string& s) {
  if (s == "objective") return GlobalStrategy::objective;
  if (s == "dfs") return GlobalStrategy::dfs;
  return std::nullopt;
}

const char* toString(Heuristic h) {
  switch (h) {
    case Heuristic::errReduction: return "err-reduction";
    case Heuristic::gpRankedChoice: return "gp-ranked-choice";
    case Heuristic::gpCount: return "gp-count";
  }
  return "err-reduction";
}

const char* toString(GlobalStrategy g) {
  return g == GlobalStrategy::objective ? "objective" : "dfs";
}

namespace {

const SearchState& asState(const engine::State& s) {
  return *static_cast<const SearchState*>(s.get());
}

}  // namespace

RunOutcome runSearch(const RunContext& ctx) {
  engine::Callbacks callbacks;
  callbacks.chooseVariable = [&ctx](const engine::State& s) {
    return chooseVariableChrono(asState(s));
  };
  callbacks.chooseValue = [&ctx](const engine::State& s, int var) {
    return sortValues(ctx, asState(s), var, ctx.config.heuristic);
  };
  callbacks.propagateChoices = [&ctx](const engine::State& s, int var,
                                      int value) {
    auto child =
        std::make_shared<SearchState>(applyChoice(ctx, asState(s), var, value));
    engine::ChildResult out;
    out.score = child->score;
    out.state = std::move(child);
    return out;
  };
  callbacks.isFeasible = [&ctx](const engine::State& s) {
    return isFeasible(ctx, asState(s));
  };

  engine::SearchLimits limits;
  limits.beamWidth = ctx.config.beamWidth;
  limits.nodeBudget = ctx.config.nodeBudget;
  limits.openCap = ctx.config.openCap;
  limits.completionTarget = ctx.config.completionTarget;
  // Depth-first answers with its own dive's first solution; by default it
  // stops right there instead of collecting beamWidth alternatives.
  limits.keepFirstComplete = ctx.config.global == GlobalStrategy::dfs;
  if (limits.keepFirstComplete && ctx.config.completionTarget == 0)
    limits.completionTarget = 1;

  auto root = std::make_shared<SearchState>(makeRootState(ctx));
  engine::NodeStrategy strategy = ctx.config.global == GlobalStrategy::objective
                                      ? engine::NodeStrategy::objective
                                      : engine::NodeStrategy::dfs;
  engine::SearchResult res = engine::planIt(root, callbacks, strategy, limits);

  RunOutcome out;
  out.state = asState(res.best->state);
  out.complete = res.complete;
  out.truncated = res.truncated;
  out.nodesCreated = res.nodesCreated;
  return out;
}

Plan planFromState(const SearchState& state) {
  Plan plan;
  plan.commands = state.steps;
  std::stable_sort(plan.commands.begin(), plan.commands.end(),
                   [](const PlannedCommand& a, const PlannedCommand& b) {
                     return std::tie(a.satId, a.start) <
                            std::tie(b.satId, b.start);
                   });
  plan.planScore = state.score;
  plan.fulfilledReservations = state.fulfilledReservations;
  return plan;
}

Metrics metricsFromResult(const PlanResult& result) {
  Metrics m;
  m.planScore = result.plan.planScore;
  m.gpObserved = result.observed.size();
  if (!result.observed.empty()) {
    double sum = 0.0;
    for (const auto& [gp, err] : result.observed) sum += err;
    m.avgErrPerObservedGP = sum / static_cast<double>(result.observed.size());
  }
  m.imageCount = result.plan.commands.size();
  return m;
}

PlanResult runSinglePass(const Scenario& scenario,
                         const PlannerConfig& config) {
  if (scenario.energy.initialCharge < scenario.energy.minCharge)
    throw PlanError("infeasible at root: initial charge " +
                    std::to_string(scenario.energy.initialCharge) +
                    " is below the minimum " +
                    std::to_string(scenario.energy.minCharge));

  RunContext ctx;
  ctx.scenario = &scenario;
  ctx.variables = &scenario.variables;
  ctx.config = config;

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

}  // namespace agiplan
