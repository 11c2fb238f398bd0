#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace agiplan {

using GpId = std::int64_t;
using Tick = int;

enum class Biome { barren, shrubs, forest, croplands, grasslands, other };
enum class Cohort { rainy, nonRainy, saturated };
enum class InstrumentId { L, P };

const char* toString(Biome b);
const char* toString(Cohort c);
const char* toString(InstrumentId i);
std::optional<Biome> biomeFromString(const std::string& s);
std::optional<InstrumentId> instrumentFromString(const std::string& s);

struct GroundPosition {
  GpId id = 0;
  double lat = 0.0;
  double lon = 0.0;
  Biome biome = Biome::other;
  double modelError = 0.0;  // initial model error at tick 0
  Cohort cohort = Cohort::nonRainy;
  std::optional<Tick> lastObservedTick;
};

struct Instrument {
  InstrumentId id = InstrumentId::L;
  double imagingPowerRate = 0.0;  // charge fraction per second while imaging
};

struct InstrumentPair {
  InstrumentId inst = InstrumentId::L;
  int angle = 0;

  friend bool operator==(const InstrumentPair&, const InstrumentPair&) = default;
  friend auto operator<=>(const InstrumentPair&, const InstrumentPair&) = default;
};

// Builds the canonical signature string, e.g. "L@32" or "L@32+P@32".
// Pairs are ordered L before P.
std::string makeSignature(const std::vector<InstrumentPair>& pairs);

// One assignable command: one or two <instrument, angle> pairs plus the GPs
// the observation would cover.
struct CommandChoice {
  std::vector<InstrumentPair> pairs;  // size 1 or 2, sorted, distinct instruments
  std::vector<GpId> covered;          // sorted ascending

  std::string signature() const { return makeSignature(pairs); }
  int angle() const { return pairs.front().angle; }
  bool isDual() const { return pairs.size() == 2; }
};

struct TimepointVariable {
  int satId = 0;
  Tick tick = 0;
  std::vector<CommandChoice> domain;
};

class MeasurementErrorTable {
 public:
  void set(const std::string& signature, Biome biome, double error);
  std::optional<double> lookup(const std::string& signature, Biome biome) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, int>, double> entries_;
};

struct SlewEntry {
  int seconds = 0;
  double energy = 0.0;
};

class SlewTable {
 public:
  void set(int fromAngle, int toAngle, int seconds, double energy);
  // (a, a) defaults to {0, 0} if absent.
  SlewEntry lookup(int fromAngle, int toAngle) const;
  bool has(int fromAngle, int toAngle) const;
  // Verifies zero diagonal and that cost is nondecreasing in |to - from|
  // for each fixed origin. Returns a diagnostic on failure.
  std::optional<std::string> validateMonotone() const;

 private:
  std::map<std::pair<int, int>, SlewEntry> entries_;
};

// How model error grows between observations.
struct ErrorDynamics {
  double driftRate = 1e-6;  // per second
  double rainBump = 0.01;   // per rain event
  double cap = 1.0;
};

// Eq.-style clamped reward for observing a single GP.
double gpReward(double priorError, double measurementError);

// Model error after elapsed time and rain, before any new observation.
double evolveModelError(double priorError, Tick fromTick, Tick toTick,
                        int rainEvents, const ErrorDynamics& dyn);

enum class CommandType { TakeImage, Slew, Idle };

struct PlannedCommand {
  int satId = 0;
  Tick start = 0;  // inclusive
  Tick end = 0;    // exclusive
  CommandType type = CommandType::TakeImage;
  std::vector<InstrumentPair> pairs;            // TakeImage only
  int fromAngle = -1, toAngle = -1;             // Slew only
  std::vector<GpId> rewardedGps;                // GPs credited to this command
  double reward = 0.0;
  std::vector<int> reservationIds;              // fulfilled follow-ups, if any
  int pass = 0;                                 // multipass provenance
};

struct Reservation {
  int id = -1;
  int satId = 0;
  Tick earliest = 0;
  Tick latest = 0;  // <= firstTick + 7200
  InstrumentId requiredInstrument = InstrumentId::L;
  GpId gp = 0;
  Tick firstTick = 0;
  std::string firstSignature;
  double firstError = 0.0;
};

struct Plan {
  // TakeImage commands only, sorted by (satId, start). Slew/Idle rows are
  // derived on output.
  std::vector<PlannedCommand> commands;
  double planScore = 0.0;
  std::vector<Reservation> fulfilledReservations;
};

double planScoreOf(const Plan& plan);

struct EnergyConfig {
  double minCharge = 0.70;
  double imagingRate = 0.0008;  // per second per active instrument
  double solarRate = 2e-5;      // per second outside eclipse
  double initialCharge = 0.85;
};

struct InitialErrorConfig {
  double mean = 0.0161;
  double spread = 0.0;
  std::uint64_t seed = 0;
};

// Deterministic per-GP initial model error derived from the config.
double initialModelError(GpId gp, const InitialErrorConfig& cfg);

struct GPChoiceOption {
  int satId = 0;
  Tick tick = 0;
  std::string signature;
  double error = 0.0;
};

// gpId -> viewing options sorted ascending by (error, tick, satId, signature).
using GPChoiceIndex = std::map<GpId, std::vector<GPChoiceOption>>;

struct Scenario {
  std::vector<GroundPosition> gps;
  std::unordered_map<GpId, std::size_t> gpById;
  std::vector<int> satIds;  // sorted
  std::vector<TimepointVariable> variables;  // sorted by (tick, satId)
  MeasurementErrorTable errTable;
  SlewTable slew;
  std::unordered_map<GpId, std::vector<Tick>> rainEvents;  // sorted ticks
  std::set<GpId> saturated;
  EnergyConfig energy;
  std::map<int, std::vector<std::pair<Tick, Tick>>> eclipse;  // per sat, [a,b)
  ErrorDynamics dynamics;
  Tick horizon = 21600;
  GPChoiceIndex gpChoices;
  // (gp, sat, tick, signature) -> 1-based rank position within gpChoices[gp];
  // equal errors share the lower position.
  std::unordered_map<GpId, std::unordered_map<std::string, int>> gpChoiceRank;
  std::unordered_map<GpId, std::size_t> gpChoiceCount;

  const GroundPosition& gp(GpId id) const { return gps[gpById.at(id)]; }
  int rainEventsBefore(GpId id, Tick tick) const;
  // Model error of a GP at `tick` assuming it has not been observed yet.
  double priorErrorAt(GpId id, Tick tick) const;
  static std::string rankKey(int satId, Tick tick, const std::string& sig);
};

}  // namespace agiplan
