#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/types.hpp"

using namespace agiplan;

TEST_CASE("signature strings are canonical") {
  CHECK(makeSignature({{InstrumentId::P, 48}}) == "P@48");
  CHECK(makeSignature({{InstrumentId::L, 3}}) == "L@3");
  // Pairs are sorted L before P regardless of input order.
  CHECK(makeSignature({{InstrumentId::P, 5}, {InstrumentId::L, 5}}) ==
        "L@5+P@5");
  CHECK(makeSignature({{InstrumentId::L, 5}, {InstrumentId::P, 7}}) ==
        "L@5+P@7");
}

TEST_CASE("command choice helpers") {
  CommandChoice c;
  c.pairs = {{InstrumentId::L, 12}, {InstrumentId::P, 12}};
  c.covered = {1, 2, 3};
  CHECK(c.signature() == "L@12+P@12");
  CHECK(c.angle() == 12);
  CHECK(c.isDual());
  CommandChoice single;
  single.pairs = {{InstrumentId::P, 0}};
  CHECK_FALSE(single.isDual());
}

TEST_CASE("gp reward is the clamped error reduction") {
  CHECK(gpReward(0.05, 0.02) == doctest::Approx(0.03));
  CHECK(gpReward(0.02, 0.05) == 0.0);  // worse measurement earns nothing
  CHECK(gpReward(0.02, 0.02) == 0.0);
}

TEST_CASE("model error evolves with drift and rain, capped") {
  ErrorDynamics dyn{1e-4, 0.01, 1.0};
  CHECK(evolveModelError(0.05, 0, 100, 0, dyn) == doctest::Approx(0.06));
  CHECK(evolveModelError(0.05, 0, 100, 2, dyn) == doctest::Approx(0.08));
  CHECK(evolveModelError(0.05, 50, 150, 0, dyn) == doctest::Approx(0.06));
  ErrorDynamics capped{1.0, 0.0, 0.2};
  CHECK(evolveModelError(0.1, 0, 1000, 0, capped) == doctest::Approx(0.2));
}

TEST_CASE("initial model error is deterministic and clamped") {
  InitialErrorConfig cfg{0.0161, 0.005, 99};
  const double a = initialModelError(7, cfg);
  CHECK(initialModelError(7, cfg) == a);
  CHECK(a >= 0.0161 - 0.005);
  CHECK(a <= 0.0161 + 0.005);
  CHECK(initialModelError(8, cfg) != a);  // different GP, different draw

  InitialErrorConfig flat{0.02, 0.0, 0};
  CHECK(initialModelError(123, flat) == 0.02);

  InitialErrorConfig wide{0.001, 10.0, 3};
  for (GpId g = 0; g < 200; ++g) CHECK(initialModelError(g, wide) >= 0.0);
}

TEST_CASE("measurement error table lookups") {
  MeasurementErrorTable t;
  t.set("L@3", Biome::forest, 0.012);
  t.set("L@3+P@3", Biome::forest, 0.004);
  CHECK(t.lookup("L@3", Biome::forest) == 0.012);
  CHECK(t.lookup("L@3+P@3", Biome::forest) == 0.004);
  CHECK_FALSE(t.lookup("L@3", Biome::barren).has_value());
  CHECK_FALSE(t.lookup("P@3", Biome::forest).has_value());
  CHECK(t.size() == 2);
}

TEST_CASE("slew table defaults and monotonicity validation") {
  SlewTable s;
  CHECK(s.lookup(5, 5).seconds == 0);  // identity slew by default
  s.set(0, 1, 2, 0.001);
  s.set(0, 2, 4, 0.002);
  CHECK(s.has(0, 1));
  CHECK_FALSE(s.has(1, 0));
  CHECK(s.lookup(0, 2).seconds == 4);
  CHECK_FALSE(s.validateMonotone().has_value());

  SUBCASE("nonzero diagonal is rejected") {
    s.set(3, 3, 1, 0.0);
    CHECK(s.validateMonotone().has_value());
  }
  SUBCASE("cost decreasing in distance is rejected") {
    s.set(0, 3, 1, 0.0005);  // farther but cheaper than (0, 2)
    CHECK(s.validateMonotone().has_value());
  }
}

TEST_CASE("plan score sums image rewards only") {
  Plan plan;
  PlannedCommand img;
  img.type = CommandType::TakeImage;
  img.reward = 1.5;
  plan.commands.push_back(img);
  img.reward = 0.25;
  plan.commands.push_back(img);
  PlannedCommand slew;
  slew.type = CommandType::Slew;
  slew.reward = 99.0;  // must be ignored
  plan.commands.push_back(slew);
  CHECK(planScoreOf(plan) == doctest::Approx(1.75));
}

TEST_CASE("scenario prior error accounts for elapsed rain events") {
  Scenario sc;
  GroundPosition g;
  g.id = 4;
  g.modelError = 0.05;
  sc.gpById[4] = 0;
  sc.gps.push_back(g);
  sc.dynamics = {0.0, 0.01, 1.0};
  sc.rainEvents[4] = {100, 200, 300};

  CHECK(sc.rainEventsBefore(4, 99) == 0);
  CHECK(sc.rainEventsBefore(4, 100) == 1);  // events at the tick count
  CHECK(sc.rainEventsBefore(4, 250) == 2);
  CHECK(sc.rainEventsBefore(4, 1000) == 3);
  CHECK(sc.rainEventsBefore(5, 1000) == 0);

  CHECK(sc.priorErrorAt(4, 50) == doctest::Approx(0.05));
  CHECK(sc.priorErrorAt(4, 250) == doctest::Approx(0.07));
}

TEST_CASE("enum string round trips") {
  for (auto b : {Biome::barren, Biome::shrubs, Biome::forest, Biome::croplands,
                 Biome::grasslands, Biome::other})
    CHECK((biomeFromString(toString(b)) == b));
  CHECK_FALSE(biomeFromString("swamp").has_value());
  CHECK((instrumentFromString("L") == InstrumentId::L));
  CHECK((instrumentFromString("P") == InstrumentId::P));
  CHECK_FALSE(instrumentFromString("X").has_value());
}
