#include "agiplan.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "audit/audit.hpp"
#include "experiment/experiment.hpp"
#include "gen/generator.hpp"
#include "ingest/ingest.hpp"
#include "io/plan_io.hpp"
#include "multipass/multipass.hpp"

using json = nlohmann::json;

struct agi_scenario {
  agiplan::Scenario scenario;
  std::size_t rawChoices = 0;
  std::size_t flattenedChoices = 0;
};

struct agi_plan {
  agiplan::Plan plan;
  agiplan::Metrics metrics;
  bool hasMetrics = false;
};

namespace {

thread_local std::string tlError;

int fail(int code, const std::string& msg) {
  tlError = msg;
  return code;
}

char* dupString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Maps C++ exceptions from the core onto error codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    tlError.clear();
    return fn();
  } catch (const agiplan::IngestError& e) {
    return fail(AGI_ERR_PARSE, e.what());
  } catch (const agiplan::PlanError& e) {
    return fail(AGI_ERR_PLAN, e.what());
  } catch (const json::exception& e) {
    return fail(AGI_ERR_INVALID_ARG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(AGI_ERR_INVALID_ARG, e.what());
  } catch (const std::runtime_error& e) {
    return fail(AGI_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(AGI_ERR_INTERNAL, e.what());
  }
}

json parseConfigJson(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  return j;
}

agiplan::PlannerConfig plannerConfigFromJson(const json& j) {
  agiplan::PlannerConfig config;
  if (j.contains("heuristic")) {
    auto h = agiplan::heuristicFromString(j.at("heuristic").get<std::string>());
    if (!h) throw std::invalid_argument("unknown heuristic");
    config.heuristic = *h;
  }
  if (j.contains("global")) {
    auto g = agiplan::strategyFromString(j.at("global").get<std::string>());
    if (!g) throw std::invalid_argument("unknown global strategy");
    config.global = *g;
  }
  if (j.contains("beamWidth"))
    config.beamWidth = j.at("beamWidth").get<std::size_t>();
  if (j.contains("nodeBudget"))
    config.nodeBudget = j.at("nodeBudget").get<std::size_t>();
  if (j.contains("passes")) {
    const std::string p = j.at("passes").get<std::string>();
    if (p == "multi")
      config.passes = agiplan::PassMode::multi;
    else if (p == "single")
      config.passes = agiplan::PassMode::single;
    else
      throw std::invalid_argument("passes must be 'single' or 'multi'");
  }
  if (config.beamWidth < 1)
    throw std::invalid_argument("beamWidth must be >= 1");
  return config;
}

json metricsToJson(const agiplan::Metrics& m) {
  return json{{"planScore", m.planScore},
              {"gpObserved", m.gpObserved},
              {"avgErrPerObservedGP", m.avgErrPerObservedGP},
              {"imageCount", m.imageCount},
              {"nodesCreated", m.nodesCreated},
              {"truncated", m.truncated}};
}

}  // namespace

extern "C" {

const char* agi_last_error(void) { return tlError.c_str(); }

void agi_string_free(char* s) { delete[] s; }
void agi_scenario_free(agi_scenario* scenario) { delete scenario; }
void agi_plan_free(agi_plan* plan) { delete plan; }

int agi_generate(const char* params_json, const char* out_dir) {
  if (out_dir == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "out_dir is null");
  return guarded([&] {
    const json j = parseConfigJson(params_json);
    agiplan::GenParams params;
    std::uint64_t seed = 42;
    if (j.contains("nSats")) params.nSats = j.at("nSats").get<int>();
    if (j.contains("nGPs")) params.nGPs = j.at("nGPs").get<long long>();
    if (j.contains("horizonSeconds"))
      params.horizonSeconds = j.at("horizonSeconds").get<agiplan::Tick>();
    if (j.contains("anglesPerInstrument"))
      params.anglesPerInstrument = j.at("anglesPerInstrument").get<int>();
    if (j.contains("meanChoicesPerTP"))
      params.meanChoicesPerTP = j.at("meanChoicesPerTP").get<double>();
    if (j.contains("rainFraction"))
      params.rainFraction = j.at("rainFraction").get<double>();
    if (j.contains("saturationFraction"))
      params.saturationFraction = j.at("saturationFraction").get<double>();
    if (j.contains("eclipseFraction"))
      params.eclipseFraction = j.at("eclipseFraction").get<double>();
    if (j.contains("duplicationFactor"))
      params.duplicationFactor = j.at("duplicationFactor").get<int>();
    if (j.contains("tpPerSat")) params.tpPerSat = j.at("tpPerSat").get<int>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    agiplan::generateScenario(params, seed, out_dir);
    return AGI_OK;
  });
}

int agi_scenario_load(const char* dir, agi_scenario** out) {
  if (dir == nullptr || out == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "dir/out is null");
  *out = nullptr;
  return guarded([&] {
    agiplan::RawScenario raw = agiplan::parseScenario(dir);
    auto handle = std::make_unique<agi_scenario>();
    handle->scenario = agiplan::buildScenario(raw);
    handle->rawChoices = raw.rawChoiceCount;
    handle->flattenedChoices = agiplan::flattenedChoiceCount(handle->scenario);
    *out = handle.release();
    return AGI_OK;
  });
}

int agi_scenario_emit_inputs(const agi_scenario* scenario,
                             const char* out_dir) {
  if (scenario == nullptr || out_dir == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/out_dir is null");
  return guarded([&] {
    agiplan::emitPlannerInputs(scenario->scenario, out_dir);
    return AGI_OK;
  });
}

int agi_scenario_stats(const agi_scenario* scenario, char** out_json) {
  if (scenario == nullptr || out_json == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/out_json is null");
  return guarded([&] {
    json j{{"rawChoices", scenario->rawChoices},
           {"flattenedChoices", scenario->flattenedChoices},
           {"variables", scenario->scenario.variables.size()},
           {"groundPositions", scenario->scenario.gps.size()},
           {"satellites", scenario->scenario.satIds.size()}};
    *out_json = dupString(j.dump());
    return AGI_OK;
  });
}

int agi_plan_run(const agi_scenario* scenario, const char* config_json,
                 agi_plan** out) {
  if (scenario == nullptr || out == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/out is null");
  *out = nullptr;
  return guarded([&] {
    const agiplan::PlannerConfig config =
        plannerConfigFromJson(parseConfigJson(config_json));
    agiplan::PlanResult result =
        agiplan::planMission(scenario->scenario, config);
    auto handle = std::make_unique<agi_plan>();
    handle->plan = std::move(result.plan);
    handle->metrics = result.metrics;
    handle->hasMetrics = true;
    *out = handle.release();
    return AGI_OK;
  });
}

int agi_plan_write(const agi_scenario* scenario, const agi_plan* plan,
                   const char* out_dir) {
  if (scenario == nullptr || plan == nullptr || out_dir == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/plan/out_dir is null");
  return guarded([&] {
    agiplan::writePlanFiles(scenario->scenario, plan->plan, out_dir);
    return AGI_OK;
  });
}

int agi_plan_load(const char* plan_jsonl, agi_plan** out) {
  if (plan_jsonl == nullptr || out == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "plan_jsonl/out is null");
  *out = nullptr;
  return guarded([&]() -> int {
    auto handle = std::make_unique<agi_plan>();
    try {
      handle->plan = agiplan::readPlanFile(plan_jsonl);
    } catch (const json::exception& e) {
      return fail(AGI_ERR_PARSE, e.what());
    }
    *out = handle.release();
    return AGI_OK;
  });
}

int agi_plan_metrics(const agi_plan* plan, char** out_json) {
  if (plan == nullptr || out_json == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "plan/out_json is null");
  if (!plan->hasMetrics)
    return fail(AGI_ERR_INVALID_ARG, "plan was loaded, not planned; no metrics");
  return guarded([&] {
    *out_json = dupString(metricsToJson(plan->metrics).dump());
    return AGI_OK;
  });
}

int agi_audit(const agi_scenario* scenario, const agi_plan* plan,
              char** out_json) {
  if (scenario == nullptr || plan == nullptr || out_json == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/plan/out_json is null");
  return guarded([&] {
    const agiplan::AuditReport report =
        agiplan::auditPlan(scenario->scenario, plan->plan);
    json j{{"ok", report.ok()},
           {"violations", report.violations},
           {"replayScore", report.replayScore},
           {"recordedScore", report.recordedScore}};
    *out_json = dupString(j.dump());
    return AGI_OK;
  });
}

int agi_experiment(const agi_scenario* scenario, const char* config_json,
                   const char* csv_path, char** out_json) {
  if (scenario == nullptr || out_json == nullptr)
    return fail(AGI_ERR_INVALID_ARG, "scenario/out_json is null");
  return guarded([&] {
    const json j = parseConfigJson(config_json);
    agiplan::ExperimentConfig config;
    if (j.contains("objectiveBeamWidths"))
      config.objectiveBeamWidths =
          j.at("objectiveBeamWidths").get<std::vector<std::size_t>>();
    if (j.contains("dfsBeamWidths"))
      config.dfsBeamWidths =
          j.at("dfsBeamWidths").get<std::vector<std::size_t>>();
    if (j.contains("nodeBudget"))
      config.base.nodeBudget = j.at("nodeBudget").get<std::size_t>();
    if (j.contains("passes")) {
      const std::string p = j.at("passes").get<std::string>();
      if (p == "multi")
        config.base.passes = agiplan::PassMode::multi;
      else if (p != "single")
        throw std::invalid_argument("passes must be 'single' or 'multi'");
    }

    const std::filesystem::path csv =
        csv_path == nullptr ? std::filesystem::path() : csv_path;
    const auto rows =
        agiplan::runExperiment(scenario->scenario, config, csv);
    json out = json::array();
    for (const auto& row : rows) {
      json r = metricsToJson(row.metrics);
      r["heuristic"] = row.heuristic;
      r["global"] = row.global;
      r["beamWidth"] = row.beamWidth;
      r["passes"] = row.passes;
      out.push_back(std::move(r));
    }
    *out_json = dupString(out.dump());
    return AGI_OK;
  });
}

}  // extern "C"
