#pragma once

#include <filesystem>
#include <string>

#include "core/types.hpp"
#include "planner/planner.hpp"

namespace agiplan {

// Shortest round-trip decimal form, deterministic across runs.
std::string formatDouble(double v);

// Human-readable per-satellite plan: `[2-4] P.48`, `[5-14] Idle`,
// `[44-45] Slew`. Ranges are inclusive ticks.
std::string emitPlanText(const Scenario& scenario, const Plan& plan, int satId);
// Parses the text form back into TakeImage commands for one satellite.
std::vector<PlannedCommand> parsePlanText(const std::string& text, int satId);

// Machine-readable plan, one JSON object per line; the first line is the
// plan-level metadata (score, reservations).
std::string emitPlanJson(const Plan& plan);
Plan parsePlanJson(const std::string& text);

// Writes plan_<satId>.txt per satellite plus plan.jsonl into outDir.
void writePlanFiles(const Scenario& scenario, const Plan& plan,
                    const std::filesystem::path& outDir);
Plan readPlanFile(const std::filesystem::path& planJsonl);

struct MetricsRow {
  std::string heuristic;
  std::string global;
  std::size_t beamWidth = 0;
  std::string passes;
  Metrics metrics;
};

// Appends one row to the metrics CSV, writing the header first if the file
// does not exist yet. Wall time is deliberately not a column.
void appendMetricsCsv(const std::filesystem::path& csvPath,
                      const MetricsRow& row);
std::string metricsCsvHeader();
std::string metricsCsvLine(const MetricsRow& row);

}  // namespace agiplan
