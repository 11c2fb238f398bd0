#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace agiplan {

enum class Heuristic { errReduction, gpRankedChoice, gpCount };
enum class GlobalStrategy { objective, dfs };
enum class PassMode { single, multi };

std::optional<Heuristic> heuristicFromString(const std::string& s);
std::optional<GlobalStrategy> strategyFromString(const std::string& s);
const char* toString(Heuristic h);
const char* toString(GlobalStrategy g);

struct PlannerConfig {
  Heuristic heuristic = Heuristic::errReduction;
  GlobalStrategy global = GlobalStrategy::objective;
  std::size_t beamWidth = 5;
  std::size_t nodeBudget = 200000;
  std::size_t openCap = 100000;
  // Complete plans to collect before stopping; 0 = beamWidth, -1 = unlimited.
  long long completionTarget = 0;
  PassMode passes = PassMode::single;
  bool followupEnabled = true;
  double followupGainThreshold = 0.5;  // relative error reduction
};

// Node-local mutable copy of one command choice.
struct OpenChoice {
  int protoIdx = 0;           // index into the variable's scenario domain
  std::vector<GpId> covered;  // shrinks under duplicate propagation
};

struct OpenVar {
  int varIdx = 0;  // index into the run's variable list
  std::vector<OpenChoice> domain;
};

struct SatState {
  double charge = 0.0;
  Tick lastEnd = 0;     // end (exclusive) of the last committed command
  int lastAngle = -1;   // -1 = no pointing commitment yet
};

struct SearchState {
  std::vector<OpenVar> open;  // sorted by (tick, satId)
  std::map<int, SatState> sats;
  double score = 0.0;
  std::vector<PlannedCommand> steps;
  std::unordered_map<GpId, double> observed;  // gp -> post-observation error
  std::vector<Reservation> activeReservations;
  std::vector<Reservation> fulfilledReservations;
  int nextReservationId = 0;
};

// One planner run over a variable set. Backfill runs restrict the variables,
// seed per-satellite boundary state, and cap energy conservatively.
struct RunContext {
  const Scenario* scenario = nullptr;
  const std::vector<TimepointVariable>* variables = nullptr;
  PlannerConfig config;

  // When enabled, choices must cover at least one GP from this cohort, and
  // only these GPs earn reward.
  bool cohortFilterEnabled = false;
  std::set<GpId> cohortFilter;
  // GPs already observed by earlier passes.
  std::set<GpId> preObserved;

  struct SatBoundary {
    double charge = 0.0;
    Tick lastEnd = 0;
    int lastAngle = -1;
    int exitAngle = -1;  // -1 = unconstrained
    Tick endTick = 0;    // commands plus exit slew must finish by here
    bool hasExit = false;
  };
  std::map<int, SatBoundary> boundary;  // empty = defaults from scenario
  bool ignoreSolar = false;             // conservative backfill energy
  int pass = 0;
};

}  // namespace agiplan
