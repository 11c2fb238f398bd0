#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "gen/generator.hpp"
#include "ingest/ingest.hpp"
#include "test_util.hpp"

using namespace agiplan;
namespace fs = std::filesystem;

namespace {

// Small but non-trivial profile so generator tests stay fast.
GenParams smallParams() {
  GenParams p;
  p.nSats = 2;
  p.nGPs = 120;
  p.tpPerSat = 6;
  p.horizonSeconds = 8000;
  return p;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("the generator emits every raw file kind") {
  const fs::path dir = testutil::freshDir("gen-files");
  generateScenario(smallParams(), 11, dir);
  for (const char* name :
       {"gp_defs.csv", "access_1.csv", "access_2.csv", "rain.csv",
        "saturation.csv", "meas_err.csv", "slew.csv", "config.json"})
    CHECK(fs::exists(dir / name));
}

TEST_CASE("generation is a deterministic function of params and seed") {
  const fs::path a = testutil::freshDir("gen-det-a");
  const fs::path b = testutil::freshDir("gen-det-b");
  const fs::path c = testutil::freshDir("gen-det-c");
  generateScenario(smallParams(), 11, a);
  generateScenario(smallParams(), 11, b);
  generateScenario(smallParams(), 12, c);

  bool anyDiffers = false;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    CHECK(slurp(a / name) == slurp(b / name));
    if (slurp(a / name) != slurp(c / name)) anyDiffers = true;
  }
  CHECK(anyDiffers);  // a different seed changes the corpus
}

TEST_CASE("generated corpora pass ingest validation end to end") {
  const fs::path dir = testutil::freshDir("gen-ingest");
  generateScenario(smallParams(), 11, dir);
  RawScenario raw = parseScenario(dir);
  CHECK(raw.gps.size() == 120);
  CHECK(raw.accessBySat.size() == 2);
  CHECK(raw.horizon == 8000);
  Scenario sc = buildScenario(raw);
  CHECK(sc.satIds.size() == 2);
  CHECK_FALSE(sc.variables.empty());
  for (const auto& var : sc.variables) CHECK_FALSE(var.domain.empty());
}

TEST_CASE("mean raw choices per timepoint tracks the profile target") {
  GenParams p;  // reference profile defaults
  const fs::path dir = testutil::freshDir("gen-density");
  generateScenario(p, 7, dir);
  RawScenario raw = parseScenario(dir);
  // The density target is defined over de-duplicated choices, so measure
  // after flattening.
  std::size_t tps = 0;
  std::size_t choices = 0;
  for (const auto& [satId, records] : raw.accessBySat) {
    std::vector<TimepointVariable> vars = flattenChoices(records);
    tps += vars.size();
    for (const auto& v : vars) choices += v.domain.size();
  }
  REQUIRE(tps > 0);
  const double mean =
      static_cast<double>(choices) / static_cast<double>(tps);
  CHECK(mean > p.meanChoicesPerTP * 0.8);
  CHECK(mean < p.meanChoicesPerTP * 1.2);
}

TEST_CASE("duplication inflates raw records by the configured factor") {
  GenParams p = smallParams();
  const fs::path dup = testutil::freshDir("gen-dup3");
  generateScenario(p, 11, dup);
  p.duplicationFactor = 1;
  const fs::path flat = testutil::freshDir("gen-dup1");
  generateScenario(p, 11, flat);

  RawScenario rawDup = parseScenario(dup);
  RawScenario rawFlat = parseScenario(flat);
  CHECK(rawDup.rawChoiceCount > 2 * rawFlat.rawChoiceCount);
  // Flattening collapses both corpora to the same planner-ready choices.
  Scenario a = buildScenario(rawDup);
  Scenario b = buildScenario(rawFlat);
  CHECK(flattenedChoiceCount(a) == flattenedChoiceCount(b));
}

TEST_CASE("rain falls in contiguous runs of ground positions") {
  GenParams p;
  p.nSats = 1;
  p.nGPs = 2000;
  p.tpPerSat = 4;
  p.rainFraction = 0.02;
  p.rainRunLength = 2;
  const fs::path dir = testutil::freshDir("gen-rain");
  generateScenario(p, 11, dir);
  RawScenario raw = parseScenario(dir);
  REQUIRE_FALSE(raw.rainEvents.empty());
  std::size_t withNeighbor = 0;
  for (const auto& [gp, ticks] : raw.rainEvents) {
    CHECK_FALSE(ticks.empty());
    for (Tick t : ticks) CHECK(t < raw.horizon);
    if (raw.rainEvents.count(gp - 1) || raw.rainEvents.count(gp + 1))
      ++withNeighbor;
  }
  // Runs of length two mean soaked GPs come with soaked neighbors (a run
  // clipped at the edge of the grid may leave at most a couple of singles).
  CHECK(withNeighbor + 2 >= raw.rainEvents.size());
  CHECK(withNeighbor >= raw.rainEvents.size() / 2);
}

TEST_CASE("parameter domain violations are rejected") {
  const fs::path dir = testutil::freshDir("gen-invalid");
  auto expectThrow = [&](GenParams p) {
    CHECK_THROWS_AS(generateScenario(p, 1, dir), std::invalid_argument);
  };
  GenParams p;
  p.nSats = 0;
  expectThrow(p);
  p = GenParams();
  p.nGPs = -1;
  expectThrow(p);
  p = GenParams();
  p.horizonSeconds = 0;
  expectThrow(p);
  p = GenParams();
  p.anglesPerInstrument = 63;
  expectThrow(p);
  p = GenParams();
  p.duplicationFactor = 0;
  expectThrow(p);
  p = GenParams();
  p.rainFraction = 1.5;
  expectThrow(p);
}

TEST_CASE("an empty world still generates a valid scenario") {
  GenParams p = smallParams();
  p.nGPs = 0;
  const fs::path dir = testutil::freshDir("gen-empty");
  generateScenario(p, 11, dir);
  RawScenario raw = parseScenario(dir);
  CHECK(raw.gps.empty());
  CHECK(raw.rawChoiceCount == 0);
  Scenario sc = buildScenario(raw);
  CHECK(sc.variables.empty());
}
