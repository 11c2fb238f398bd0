#include "heuristics/heuristics.hpp"

#include <algorithm>

#include "constraints/constraints.hpp"

namespace agiplan {

namespace {

std::vector<int> sortByKeyDesc(std::size_t n,
                               const std::vector<double>& keys) {
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] > keys[b]; });
  return order;
}

}  // namespace

std::optional<int> chooseVariableChrono(const SearchState& state) {
  // state.open stays sorted by (tick, satId), so the front is the choice.
  if (state.open.empty()) return std::nullopt;
  return 0;
}

double rankedChoiceReward(const Scenario& scenario, GpId gp, int satId,
                          Tick tick, const std::string& signature) {
  auto countIt = scenario.gpChoiceCount.find(gp);
  if (countIt == scenario.gpChoiceCount.end()) return 0.0;
  const double n = static_cast<double>(countIt->second);
  auto rankIt = scenario.gpChoiceRank.find(gp);
  if (rankIt == scenario.gpChoiceRank.end()) return 0.0;
  auto posIt = rankIt->second.find(Scenario::rankKey(satId, tick, signature));
  if (posIt == rankIt->second.end()) return 0.0;
  return (n - static_cast<double>(posIt->second)) / n;
}

std::vector<int> sortValuesErrReduction(const RunContext& ctx,
                                        const SearchState& state, int varPos) {
  const OpenVar& var = state.open[varPos];
  std::vector<double> keys(var.domain.size());
  for (std::size_t i = 0; i < var.domain.size(); ++i)
    keys[i] = choiceReward(ctx, state, var, var.domain[i]);
  return sortByKeyDesc(var.domain.size(), keys);
}

std::vector<int> sortValuesGpRankedChoice(const RunContext& ctx,
                                          const SearchState& state,
                                          int varPos) {
  const OpenVar& var = state.open[varPos];
  const TimepointVariable& tv = (*ctx.variables)[var.varIdx];
  std::vector<double> keys(var.domain.size());
  for (std::size_t i = 0; i < var.domain.size(); ++i) {
    const OpenChoice& oc = var.domain[i];
    const std::string sig = tv.domain[oc.protoIdx].signature();
    double sum = 0.0;
    for (GpId gp : oc.covered)
      sum += rankedChoiceReward(*ctx.scenario, gp, tv.satId, tv.tick, sig);
    keys[i] = sum;
  }
  return sortByKeyDesc(var.domain.size(), keys);
}

std::vector<int> sortValuesGpCount(const RunContext& ctx,
                                   const SearchState& state, int varPos) {
  (void)ctx;
  const OpenVar& var = state.open[varPos];
  std::vector<double> keys(var.domain.size());
  for (std::size_t i = 0; i < var.domain.size(); ++i)
    keys[i] = static_cast<double>(var.domain[i].covered.size());
  return sortByKeyDesc(var.domain.size(), keys);
}

std::vector<int> sortValues(const RunContext& ctx, const SearchState& state,
                            int varPos, Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::errReduction:
      return sortValuesErrReduction(ctx, state, varPos);
    case Heuristic::gpRankedChoice:
      return sortValuesGpRankedChoice(ctx, state, varPos);
    case Heuristic::gpCount:
      return sortValuesGpCount(ctx, state, varPos);
  }
  return {};
}

}  // namespace agiplan
