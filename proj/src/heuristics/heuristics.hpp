#pragma once

#include "planner/search_state.hpp"

namespace agiplan {

// Open variable to branch on: minimum tick, ties by satId. Returns the
// position in state.open, or nullopt when no variables remain.
std::optional<int> chooseVariableChrono(const SearchState& state);

// Ranked-choice reward for one (gp, command) pair: (|C_i| - pos) / |C_i|,
// with static 1-based positions from the GP choice index.
double rankedChoiceReward(const Scenario& scenario, GpId gp, int satId,
                          Tick tick, const std::string& signature);

// Value orderings (best first, stable). Returned values are indices into the
// variable's current domain.
std::vector<int> sortValuesErrReduction(const RunContext& ctx,
                                        const SearchState& state, int varPos);
std::vector<int> sortValuesGpRankedChoice(const RunContext& ctx,
                                          const SearchState& state, int varPos);
std::vector<int> sortValuesGpCount(const RunContext& ctx,
                                   const SearchState& state, int varPos);

std::vector<int> sortValues(const RunContext& ctx, const SearchState& state,
                            int varPos, Heuristic heuristic);

}  // namespace agiplan
