#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "agiplan.h"

using json = nlohmann::json;

namespace {

int bail(int code) {
  std::fprintf(stderr, "error: %s\n", agi_last_error());
  return code == AGI_ERR_INVALID_ARG ? 2 : 1;
}

struct ScenarioHandle {
  agi_scenario* ptr = nullptr;
  ~ScenarioHandle() { agi_scenario_free(ptr); }
};

struct PlanHandle {
  agi_plan* ptr = nullptr;
  ~PlanHandle() { agi_plan_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { agi_string_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agile satellite constellation observation planner"};
  app.require_subcommand(1);

  // gen
  std::string genOut;
  json genParams = json::object();
  int nSats = 3;
  long long nGPs = 1660;
  long long horizonSeconds = 21600;
  std::uint64_t seed = 42;
  int duplicationFactor = 3;
  int tpPerSat = 0;
  double rainFraction = 0.15, saturationFraction = 0.10, eclipseFraction = 0.20;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic raw scenario");
  gen->add_option("--out", genOut, "Output directory")->required();
  gen->add_option("--sats", nSats, "Number of satellites");
  gen->add_option("--gps", nGPs, "Number of ground positions");
  gen->add_option("--horizon-seconds", horizonSeconds, "Planning horizon");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--duplication-factor", duplicationFactor,
                  "Raw record copies per access");
  gen->add_option("--tp-per-sat", tpPerSat,
                  "Timepoints per satellite (0 = derive from GP count)");
  gen->add_option("--rain-fraction", rainFraction, "Share of GPs with rain");
  gen->add_option("--saturation-fraction", saturationFraction,
                  "Share of saturated GPs");
  gen->add_option("--eclipse-fraction", eclipseFraction,
                  "Eclipsed share of the horizon per satellite");

  // ingest
  std::string inScenario, inOut;
  auto* ingest =
      app.add_subcommand("ingest", "Flatten a raw scenario and emit planner inputs");
  ingest->add_option("--scenario", inScenario, "Raw scenario directory")
      ->required();
  ingest->add_option("--out", inOut, "Output directory for planner inputs")
      ->required();

  // plan
  std::string planScenario, planOut;
  std::string heuristic = "err-reduction";
  std::string global = "objective";
  std::string passes = "single";
  std::size_t beamWidth = 5;
  std::size_t nodeBudget = 200000;
  auto* plan = app.add_subcommand("plan", "Plan a mission and write the plan");
  plan->add_option("--scenario", planScenario, "Raw scenario directory")
      ->required();
  plan->add_option("--out", planOut, "Output directory for plan files")
      ->required();
  plan->add_option("--beam-width", beamWidth, "Beam width");
  plan->add_option("--heuristic", heuristic,
                   "err-reduction | gp-ranked-choice | gp-count");
  plan->add_option("--global", global, "objective | dfs");
  plan->add_option("--passes", passes, "single | multi");
  plan->add_option("--node-budget", nodeBudget, "Search node budget");
  plan->add_option("--horizon-seconds", horizonSeconds,
                   "Planning horizon (informational; the scenario's own "
                   "horizon governs)");

  // audit
  std::string auditScenario, auditPlanPath;
  auto* audit = app.add_subcommand("audit", "Audit an emitted plan");
  audit->add_option("--scenario", auditScenario, "Raw scenario directory")
      ->required();
  audit->add_option("--plan", auditPlanPath, "plan.jsonl path")->required();

  // experiment
  std::string expScenario, expCsv;
  std::size_t expBudget = 200000;
  std::string expPasses = "single";
  auto* experiment =
      app.add_subcommand("experiment", "Heuristic/strategy/beam-width sweep");
  experiment->add_option("--scenario", expScenario, "Raw scenario directory")
      ->required();
  experiment->add_option("--csv", expCsv, "Metrics CSV to append")->required();
  experiment->add_option("--node-budget", expBudget, "Search node budget");
  experiment->add_option("--passes", expPasses, "single | multi");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    genParams["nSats"] = nSats;
    genParams["nGPs"] = nGPs;
    genParams["horizonSeconds"] = horizonSeconds;
    genParams["seed"] = seed;
    genParams["duplicationFactor"] = duplicationFactor;
    genParams["tpPerSat"] = tpPerSat;
    genParams["rainFraction"] = rainFraction;
    genParams["saturationFraction"] = saturationFraction;
    genParams["eclipseFraction"] = eclipseFraction;
    int rc = agi_generate(genParams.dump().c_str(), genOut.c_str());
    if (rc != AGI_OK) return bail(rc);
    std::printf("wrote scenario to %s\n", genOut.c_str());
    return 0;
  }

  if (ingest->parsed()) {
    ScenarioHandle sc;
    int rc = agi_scenario_load(inScenario.c_str(), &sc.ptr);
    if (rc != AGI_OK) return bail(rc);
    rc = agi_scenario_emit_inputs(sc.ptr, inOut.c_str());
    if (rc != AGI_OK) return bail(rc);
    OwnedString stats;
    rc = agi_scenario_stats(sc.ptr, &stats.ptr);
    if (rc != AGI_OK) return bail(rc);
    std::printf("%s\n", stats.ptr);
    return 0;
  }

  if (plan->parsed()) {
    ScenarioHandle sc;
    int rc = agi_scenario_load(planScenario.c_str(), &sc.ptr);
    if (rc != AGI_OK) return bail(rc);
    json config{{"heuristic", heuristic},
                {"global", global},
                {"beamWidth", beamWidth},
                {"nodeBudget", nodeBudget},
                {"passes", passes}};
    PlanHandle ph;
    rc = agi_plan_run(sc.ptr, config.dump().c_str(), &ph.ptr);
    if (rc != AGI_OK) return bail(rc);
    rc = agi_plan_write(sc.ptr, ph.ptr, planOut.c_str());
    if (rc != AGI_OK) return bail(rc);
    OwnedString metrics;
    rc = agi_plan_metrics(ph.ptr, &metrics.ptr);
    if (rc != AGI_OK) return bail(rc);
    std::printf("%s\n", metrics.ptr);
    return 0;
  }

  if (audit->parsed()) {
    ScenarioHandle sc;
    int rc = agi_scenario_load(auditScenario.c_str(), &sc.ptr);
    if (rc != AGI_OK) return bail(rc);
    PlanHandle ph;
    rc = agi_plan_load(auditPlanPath.c_str(), &ph.ptr);
    if (rc != AGI_OK) return bail(rc);
    OwnedString report;
    rc = agi_audit(sc.ptr, ph.ptr, &report.ptr);
    if (rc != AGI_OK) return bail(rc);
    std::printf("%s\n", report.ptr);
    return json::parse(report.ptr).at("ok").get<bool>() ? 0 : 1;
  }

  if (experiment->parsed()) {
    ScenarioHandle sc;
    int rc = agi_scenario_load(expScenario.c_str(), &sc.ptr);
    if (rc != AGI_OK) return bail(rc);
    json config{{"nodeBudget", expBudget}, {"passes", expPasses}};
    OwnedString rows;
    rc = agi_experiment(sc.ptr, config.dump().c_str(), expCsv.c_str(),
                        &rows.ptr);
    if (rc != AGI_OK) return bail(rc);
    std::printf("%s\n", rows.ptr);
    return 0;
  }

  return 0;
}
