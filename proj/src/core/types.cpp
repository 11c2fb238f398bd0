#include "core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace agiplan {

const char* toString(Biome b) {
  switch (b) {
    case Biome::barren: return "barren";
    case Biome::shrubs: return "shrubs";
    case Biome::forest: return "forest";
    case Biome::croplands: return "croplands";
    case Biome::grasslands: return "grasslands";
    case Biome::other: return "other";
  }
  return "other";
}

const char* toString(Cohort c) {
  switch (c) {
    case Cohort::rainy: return "rainy";
    case Cohort::nonRainy: return "nonRainy";
    case Cohort::saturated: return "saturated";
  }
  return "nonRainy";
}

const char* toString(InstrumentId i) {
  return i == InstrumentId::L ? "L" : "P";
}

std::optional<Biome> biomeFromString(const std::string& s) {
  static const std::pair<const char*, Biome> table[] = {
      {"barren", Biome::barren},       {"shrubs", Biome::shrubs},
      {"forest", Biome::forest},       {"croplands", Biome::croplands},
      {"grasslands", Biome::grasslands}, {"other", Biome::other},
  };
  for (const auto& [name, b] : table)
    if (s == name) return b;
  return std::nullopt;
}

std::optional<InstrumentId> instrumentFromString(const std::string& s) {
  if (s == "L") return InstrumentId::L;
  if (s == "P") return InstrumentId::P;
  return std::nullopt;
}

std::string makeSignature(const std::vector<InstrumentPair>& pairs) {
  std::vector<InstrumentPair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += '+';
    out += toString(sorted[i].inst);
    out += '@';
    out += std::to_string(sorted[i].angle);
  }
  return out;
}

void MeasurementErrorTable::set(const std::string& signature, Biome biome,
                                double error) {
  entries_[{signature, static_cast<int>(biome)}] = error;
}

std::optional<double> MeasurementErrorTable::lookup(const std::string& signature,
                                                    Biome biome) const {
  auto it = entries_.find({signature, static_cast<int>(biome)});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SlewTable::set(int fromAngle, int toAngle, int seconds, double energy) {
  entries_[{fromAngle, toAngle}] = SlewEntry{seconds, energy};
}

SlewEntry SlewTable::lookup(int fromAngle, int toAngle) const {
  auto it = entries_.find({fromAngle, toAngle});
  if (it != entries_.end()) return it->second;
  return SlewEntry{0, 0.0};  // identity slew
}

bool SlewTable::has(int fromAngle, int toAngle) const {
  return entries_.count({fromAngle, toAngle}) > 0;
}

std::optional<std::string> SlewTable::validateMonotone() const {
  for (const auto& [key, entry] : entries_) {
    if (key.first == key.second && (entry.seconds != 0 || entry.energy != 0.0))
      return "nonzero diagonal slew entry at angle " + std::to_string(key.first);
  }
  // For each origin, cost must be nondecreasing in |to - from|.
  for (const auto& [k1, e1] : entries_) {
    for (const auto& [k2, e2] : entries_) {
      if (k1.first != k2.first) continue;
      int d1 = std::abs(k1.second - k1.first);
      int d2 = std::abs(k2.second - k2.first);
      if (d1 < d2 && (e1.seconds > e2.seconds || e1.energy > e2.energy)) {
        std::ostringstream os;
        os << "slew cost not monotone from angle " << k1.first << ": |d|=" << d1
           << " costs more than |d|=" << d2;
        return os.str();
      }
    }
  }
  return std::nullopt;
}

double gpReward(double priorError, double measurementError) {
  return std::max(0.0, priorError - measurementError);
}

double evolveModelError(double priorError, Tick fromTick, Tick toTick,
                        int rainEvents, const ErrorDynamics& dyn) {
  double e = priorError + dyn.driftRate * static_cast<double>(toTick - fromTick) +
             dyn.rainBump * rainEvents;
  return std::min(e, dyn.cap);
}

double planScoreOf(const Plan& plan) {
  double s = 0.0;
  for (const auto& c : plan.commands)
    if (c.type == CommandType::TakeImage) s += c.reward;
  return s;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

double initialModelError(GpId gp, const InitialErrorConfig& cfg) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(gp) ^ cfg.seed);
  // uniform in [-1, 1)
  double u = (static_cast<double>(h >> 11) / 9007199254740992.0) * 2.0 - 1.0;
  return std::max(0.0, cfg.mean + cfg.spread * u);
}

int Scenario::rainEventsBefore(GpId id, Tick tick) const {
  auto it = rainEvents.find(id);
  if (it == rainEvents.end()) return 0;
  const auto& ticks = it->second;
  return static_cast<int>(
      std::upper_bound(ticks.begin(), ticks.end(), tick) - ticks.begin());
}

double Scenario::priorErrorAt(GpId id, Tick tick) const {
  const GroundPosition& g = gp(id);
  return evolveModelError(g.modelError, 0, tick, rainEventsBefore(id, tick),
                          dynamics);
}

std::string Scenario::rankKey(int satId, Tick tick, const std::string& sig) {
  return std::to_string(satId) + ":" + std::to_string(tick) + ":" + sig;
}

}  // namespace agiplan
