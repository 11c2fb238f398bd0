#pragma once

#include <set>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace agiplan {

struct CohortPartition {
  std::set<GpId> rainy;
  std::set<GpId> nonRainy;
  std::set<GpId> saturated;
};

// Saturation overrides rain; GPs in neither file default to nonRainy.
CohortPartition partitionCohorts(
    const std::vector<GroundPosition>& gps,
    const std::unordered_map<GpId, std::vector<Tick>>& rainEvents,
    const std::set<GpId>& saturated);

// Same partition, written into each GroundPosition's cohort field.
void assignCohorts(std::vector<GroundPosition>& gps,
                   const std::unordered_map<GpId, std::vector<Tick>>& rainEvents,
                   const std::set<GpId>& saturated);

}  // namespace agiplan
