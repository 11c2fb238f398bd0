#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace agiplan {

// Malformed scenario input (missing file, schema violation, dangling
// reference). The message carries file and line context.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RawAccessRecord {
  int satId = 0;
  Tick tick = 0;
  InstrumentId inst = InstrumentId::L;
  int angle = 0;
  std::vector<GpId> gps;
};

struct RawScenario {
  std::vector<GroundPosition> gps;
  std::unordered_map<GpId, std::size_t> gpById;
  std::map<int, std::vector<RawAccessRecord>> accessBySat;
  MeasurementErrorTable errTable;
  SlewTable slew;
  std::unordered_map<GpId, std::vector<Tick>> rainEvents;
  std::set<GpId> saturated;
  EnergyConfig energy;
  std::map<int, std::vector<std::pair<Tick, Tick>>> eclipse;
  ErrorDynamics dynamics;
  InitialErrorConfig initialError;
  std::unordered_map<GpId, Tick> lastObserved;
  Tick horizon = 21600;
  std::size_t rawChoiceCount = 0;  // total raw access records
};

// Reads the six scenario files (plus optional config.json) and validates
// cross references. Throws IngestError on malformed input.
RawScenario parseScenario(const std::filesystem::path& dir);

// Merges one satellite's raw records into per-timepoint variables. Records
// with identical (tick, instrument, angle) are merged with their GP lists
// unioned; dual-instrument choices are synthesized where both instruments
// share a (tick, angle).
std::vector<TimepointVariable> flattenChoices(
    const std::vector<RawAccessRecord>& satRecords);

GPChoiceIndex buildGPChoiceIndex(
    const std::vector<TimepointVariable>& variables,
    const MeasurementErrorTable& errTable,
    const std::vector<GroundPosition>& gps,
    const std::unordered_map<GpId, std::size_t>& gpById);

// Full pipeline: flatten per satellite, assign cohorts, apply the 24-hour
// duplicate filter, build the GP choice index and rank tables.
Scenario buildScenario(const RawScenario& raw);

// Count of command choices across all variables (including synthesized duals).
std::size_t flattenedChoiceCount(const Scenario& scenario);

// Writes tp_choices_<satId>.jsonl and gp_choices.jsonl into outDir.
void emitPlannerInputs(const Scenario& scenario,
                       const std::filesystem::path& outDir);

}  // namespace agiplan
