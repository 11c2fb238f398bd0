#include "multipass/cohorts.hpp"

namespace agiplan {

CohortPartition partitionCohorts(
    const std::vector<GroundPosition>& gps,
    const std::unordered_map<GpId, std::vector<Tick>>& rainEvents,
    const std::set<GpId>& saturated) {
  CohortPartition out;
  for (const auto& gp : gps) {
    if (saturated.count(gp.id)) {
      out.saturated.insert(gp.id);
    } else if (rainEvents.count(gp.id) && !rainEvents.at(gp.id).empty()) {
      out.rainy.insert(gp.id);
    } else {
      out.nonRainy.insert(gp.id);
    }
  }
  return out;
}

void assignCohorts(std::vector<GroundPosition>& gps,
                   const std::unordered_map<GpId, std::vector<Tick>>& rainEvents,
                   const std::set<GpId>& saturated) {
  for (auto& gp : gps) {
    if (saturated.count(gp.id)) {
      gp.cohort = Cohort::saturated;
    } else if (rainEvents.count(gp.id) && !rainEvents.at(gp.id).empty()) {
      gp.cohort = Cohort::rainy;
    } else {
      gp.cohort = Cohort::nonRainy;
    }
  }
}

}  // namespace agiplan
