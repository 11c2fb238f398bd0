#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "audit/audit.hpp"
#include "multipass/multipass.hpp"
#include "test_util.hpp"

using namespace agiplan;
using testutil::ScenarioBuilder;

namespace {

// One satellite, one rainy GP early, two plain GPs and one saturated GP
// later, with long idle stretches between them for backfill to use.
Scenario cohortScenario() {
  return ScenarioBuilder()
      .gp(1)
      .gp(2)
      .gp(3)
      .gp(4)
      .rain(1, 5)
      .saturate(4)
      .access(1, 10, InstrumentId::L, 0, {1})
      .access(1, 1000, InstrumentId::L, 0, {2})
      .access(1, 2000, InstrumentId::L, 1, {3})
      .access(1, 3000, InstrumentId::L, 0, {4})
      .err("L@0", 0.02)
      .err("L@1", 0.02)
      .slewUniform(1, 1, 0.0001)
      .build();
}

}  // namespace

TEST_CASE("cohort partition: saturation overrides rain") {
  std::vector<GroundPosition> gps(4);
  for (int i = 0; i < 4; ++i) gps[i].id = i + 1;
  std::unordered_map<GpId, std::vector<Tick>> rain{{1, {5}}, {4, {9}}};
  std::set<GpId> saturated{3, 4};
  CohortPartition part = partitionCohorts(gps, rain, saturated);
  CHECK(part.rainy == std::set<GpId>{1});
  CHECK(part.nonRainy == std::set<GpId>{2});
  CHECK(part.saturated == std::set<GpId>{3, 4});

  assignCohorts(gps, rain, saturated);
  CHECK((gps[0].cohort == Cohort::rainy));
  CHECK((gps[1].cohort == Cohort::nonRainy));
  CHECK((gps[2].cohort == Cohort::saturated));
  CHECK((gps[3].cohort == Cohort::saturated));
}

TEST_CASE("gaps cover the idle intervals with boundary angles") {
  Scenario sc = cohortScenario();
  std::vector<PlannedCommand> images;
  PlannedCommand a;
  a.satId = 1;
  a.start = 100;
  a.end = 103;
  a.pairs = {{InstrumentId::L, 0}};
  PlannedCommand b = a;
  b.start = 500;
  b.end = 503;
  b.pairs = {{InstrumentId::L, 1}};
  images = {a, b};

  std::vector<PlanGap> gaps = findGaps(sc, images);
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[0].start == 0);
  CHECK(gaps[0].end == 100);
  CHECK(gaps[0].entryAngle == -1);
  CHECK(gaps[0].exitAngle == 0);
  CHECK(gaps[1].start == 103);
  CHECK(gaps[1].end == 500);
  CHECK(gaps[1].entryAngle == 0);
  CHECK(gaps[1].exitAngle == 1);
  CHECK(gaps[2].start == 503);
  CHECK(gaps[2].end == sc.horizon);
  CHECK(gaps[2].exitAngle == -1);
  for (const PlanGap& g : gaps) CHECK(g.energyBudget > 0.0);
}

TEST_CASE("an empty plan yields one whole-horizon gap per satellite") {
  Scenario sc = cohortScenario();
  std::vector<PlanGap> gaps = findGaps(sc, {});
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].start == 0);
  CHECK(gaps[0].end == sc.horizon);
  CHECK(gaps[0].entryAngle == -1);
  CHECK(gaps[0].exitAngle == -1);
}

TEST_CASE("pass one images only rainy-cohort targets") {
  Scenario sc = cohortScenario();
  PlannerConfig config;
  CohortPartition part =
      partitionCohorts(sc.gps, sc.rainEvents, sc.saturated);
  PlanResult first = planPassOne(sc, config, part);
  REQUIRE(first.plan.commands.size() == 1);
  CHECK(first.plan.commands[0].start == 10);
  CHECK(first.plan.commands[0].pass == 1);
  // Rain bumped the prior from 0.05 to 0.06 before the tick-10 look.
  CHECK(first.plan.planScore == doctest::Approx(0.06 - 0.02));
  CHECK(first.observed.count(1) == 1);
  CHECK(first.observed.count(2) == 0);
}

TEST_CASE("backfill inserts cohort targets into idle gaps") {
  Scenario sc = cohortScenario();
  PlannerConfig config;
  CohortPartition part =
      partitionCohorts(sc.gps, sc.rainEvents, sc.saturated);
  PlanResult first = planPassOne(sc, config, part);
  PlanResult second = backfillGaps(sc, config, first, part.nonRainy, 2);

  CHECK(second.plan.commands.size() == 3);  // rainy look + both plain GPs
  CHECK(second.observed.count(2) == 1);
  CHECK(second.observed.count(3) == 1);
  CHECK(second.plan.planScore > first.plan.planScore);
  int backfilled = 0;
  for (const auto& cmd : second.plan.commands)
    if (cmd.pass == 2) ++backfilled;
  CHECK(backfilled == 2);

  AuditReport audit = auditPlan(sc, second.plan);
  CHECK(audit.violations.empty());
}

TEST_CASE("multipass covers all cohorts and stays audit-clean") {
  Scenario sc = cohortScenario();
  PlannerConfig config;
  config.passes = PassMode::multi;
  PlanResult result = planMultiPass(sc, config);

  CHECK(result.plan.commands.size() == 4);
  CHECK(result.observed.size() == 4);
  std::set<int> passes;
  for (const auto& cmd : result.plan.commands) passes.insert(cmd.pass);
  CHECK(passes == std::set<int>{1, 2, 3});

  AuditReport audit = auditPlan(sc, result.plan);
  CHECK(audit.violations.empty());
  CHECK(audit.replayScore ==
        doctest::Approx(result.plan.planScore).epsilon(1e-12));
}

TEST_CASE("planMission dispatches on the pass mode") {
  Scenario sc = cohortScenario();
  PlannerConfig config;
  config.passes = PassMode::single;
  PlanResult single = planMission(sc, config);
  CHECK(single.plan.planScore ==
        doctest::Approx(runSinglePass(sc, config).plan.planScore));
  for (const auto& cmd : single.plan.commands) CHECK(cmd.pass == 0);

  config.passes = PassMode::multi;
  PlanResult multi = planMission(sc, config);
  CHECK(multi.plan.planScore ==
        doctest::Approx(planMultiPass(sc, config).plan.planScore));
}

TEST_CASE("metrics summarize the plan result") {
  Scenario sc = cohortScenario();
  PlannerConfig config;
  PlanResult result = runSinglePass(sc, config);
  Metrics m = metricsFromResult(result);
  CHECK(m.imageCount == result.plan.commands.size());
  CHECK(m.gpObserved == result.observed.size());
  CHECK(m.planScore == doctest::Approx(result.plan.planScore));
  double sum = 0.0;
  for (const auto& [gp, err] : result.observed) sum += err;
  CHECK(m.avgErrPerObservedGP ==
        doctest::Approx(sum / static_cast<double>(result.observed.size())));
}

TEST_CASE("planning is infeasible when launched below the energy floor") {
  EnergyConfig e;
  e.initialCharge = 0.5;  // below the 0.70 minimum
  Scenario sc = ScenarioBuilder()
                    .energy(e)
                    .gp(1)
                    .access(1, 10, InstrumentId::L, 0, {1})
                    .err("L@0", 0.02)
                    .slewUniform(1, 1, 0.0001)
                    .build();
  PlannerConfig config;
  CHECK_THROWS_AS(runSinglePass(sc, config), PlanError);
}

TEST_CASE("an empty scenario plans to an empty result") {
  ScenarioBuilder b;
  Scenario sc = b.build();
  PlannerConfig config;
  for (auto mode : {PassMode::single, PassMode::multi}) {
    config.passes = mode;
    PlanResult result = planMission(sc, config);
    CHECK(result.plan.commands.empty());
    CHECK(result.plan.planScore == 0.0);
    CHECK(result.metrics.gpObserved == 0);
    CHECK(result.metrics.imageCount == 0);
  }
}
