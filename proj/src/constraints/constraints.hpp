#pragma once

#include "planner/search_state.hpp"

namespace agiplan {

// Sunlit seconds of satellite satId within [fromTick, toTick).
Tick sunlitSeconds(const Scenario& scenario, int satId, Tick fromTick,
                   Tick toTick);

// Reward of applying one choice in the current state, without mutating it.
// Cohort filtering and active reservations are honored.
double choiceReward(const RunContext& ctx, const SearchState& state,
                    const OpenVar& var, const OpenChoice& choice);

// Initial search state for a run: domains filtered for cohort, pre-observed
// GPs, entry-slew reachability and exit-slew feasibility.
SearchState makeRootState(const RunContext& ctx);

// Commits choice `choiceIdx` of open variable `varPos` and forward-checks all
// constraints: image lock, slew reachability, duplicate elimination,
// follow-up reservations, and the energy model.
SearchState applyChoice(const RunContext& ctx, const SearchState& state,
                        int varPos, int choiceIdx);

// Every satellite's charge at or above the minimum.
bool isFeasible(const RunContext& ctx, const SearchState& state);

// Parses a canonical signature string back into instrument pairs.
std::vector<InstrumentPair> parseSignature(const std::string& sig);

}  // namespace agiplan
