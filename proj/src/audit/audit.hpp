#pragma once

#include <string>
#include <vector>

#include "core/types.hpp"

namespace agiplan {

struct AuditReport {
  std::vector<std::string> violations;
  double replayScore = 0.0;   // full reward replay of the plan
  double recordedScore = 0.0;
  bool ok() const { return violations.empty(); }
};

// Independent constraint and score check of an emitted plan: image-lock
// overlaps, slew-time gaps, duplicate-GP rewards outside reservations, the
// energy floor at every command boundary, and a full reward replay compared
// against the recorded plan score.
AuditReport auditPlan(const Scenario& scenario, const Plan& plan);

// Chronological energy simulation only; true when every satellite stays at or
// above the minimum charge at every command boundary.
bool validateEnergy(const Scenario& scenario,
                    const std::vector<PlannedCommand>& images);

}  // namespace agiplan
