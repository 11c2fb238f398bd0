/* C interface to the agile-constellation observation planner.
 *
 * All functions return AGI_OK (0) on success or a negative error code;
 * agi_last_error() returns a thread-local message for the most recent
 * failure on the calling thread. Strings returned through `char**` output
 * parameters are owned by the caller and must be released with
 * agi_string_free().
 */
#ifndef AGIPLAN_H
#define AGIPLAN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define AGI_API __declspec(dllexport)
#else
#define AGI_API __attribute__((visibility("default")))
#endif

enum {
  AGI_OK = 0,
  AGI_ERR_INVALID_ARG = -1, /* null pointer or malformed JSON config */
  AGI_ERR_IO = -2,          /* file missing or unwritable */
  AGI_ERR_PARSE = -3,       /* scenario or plan file fails validation */
  AGI_ERR_PLAN = -4,        /* planning infeasible */
  AGI_ERR_INTERNAL = -5
};

typedef struct agi_scenario agi_scenario; /* ingested, planner-ready scenario */
typedef struct agi_plan agi_plan;         /* plan plus run metrics */

/* Message for the last failure on this thread; empty string if none. */
AGI_API const char* agi_last_error(void);

AGI_API void agi_string_free(char* s);
AGI_API void agi_scenario_free(agi_scenario* scenario);
AGI_API void agi_plan_free(agi_plan* plan);

/* Writes a synthetic raw scenario into out_dir. params_json keys (all
 * optional): nSats, nGPs, horizonSeconds, anglesPerInstrument,
 * meanChoicesPerTP, rainFraction, saturationFraction, eclipseFraction,
 * duplicationFactor, tpPerSat, seed. */
AGI_API int agi_generate(const char* params_json, const char* out_dir);

/* Parses the raw scenario files in dir and builds the planner-ready form. */
AGI_API int agi_scenario_load(const char* dir, agi_scenario** out);

/* Writes tp_choices_<satId>.jsonl and gp_choices.jsonl into out_dir. */
AGI_API int agi_scenario_emit_inputs(const agi_scenario* scenario,
                                     const char* out_dir);

/* Ingest statistics as JSON: rawChoices, flattenedChoices, variables,
 * groundPositions, satellites. */
AGI_API int agi_scenario_stats(const agi_scenario* scenario, char** out_json);

/* Runs the planner. config_json keys (all optional): heuristic
 * ("err-reduction" | "gp-ranked-choice" | "gp-count"), global ("objective" |
 * "dfs"), beamWidth, nodeBudget, passes ("single" | "multi"). */
AGI_API int agi_plan_run(const agi_scenario* scenario, const char* config_json,
                         agi_plan** out);

/* Writes plan_<satId>.txt per satellite plus plan.jsonl into out_dir. */
AGI_API int agi_plan_write(const agi_scenario* scenario, const agi_plan* plan,
                           const char* out_dir);

/* Reads a previously written plan.jsonl. */
AGI_API int agi_plan_load(const char* plan_jsonl, agi_plan** out);

/* Run metrics as JSON: planScore, gpObserved, avgErrPerObservedGP,
 * imageCount, nodesCreated, truncated. */
AGI_API int agi_plan_metrics(const agi_plan* plan, char** out_json);

/* Independent constraint and score audit. Returns AGI_OK whether or not
 * violations were found; out_json carries {ok, violations, replayScore,
 * recordedScore}. */
AGI_API int agi_audit(const agi_scenario* scenario, const agi_plan* plan,
                      char** out_json);

/* Heuristic x strategy x beam-width sweep. config_json keys (optional):
 * objectiveBeamWidths, dfsBeamWidths, nodeBudget, passes. Rows are appended
 * to csv_path (may be NULL to skip the file) and returned as a JSON array. */
AGI_API int agi_experiment(const agi_scenario* scenario,
                           const char* config_json, const char* csv_path,
                           char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* AGIPLAN_H */
