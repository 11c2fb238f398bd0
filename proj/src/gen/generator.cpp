#include "gen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace agiplan {

namespace fs = std::filesystem;

namespace {

// splitmix64: decouples per-file streams from the master seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Bit-level helpers on top of the engine keep the output identical across
// standard libraries (distribution objects are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 1) {}

  std::uint64_t nextU64() {
    state_ = mix(state_);
    return state_;
  }

  // Uniform in [lo, hi] via rejection sampling.
  long long uniformInt(long long lo, long long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = nextU64();
    } while (v >= limit);
    return lo + static_cast<long long>(v % span);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
  }

  double uniformReal(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // k distinct values from [0, n) in ascending order.
  std::vector<int> sampleDistinct(int k, int n) {
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < k)
      picked.insert(static_cast<int>(uniformInt(0, n - 1)));
    return {picked.begin(), picked.end()};
  }

 private:
  std::uint64_t state_;
};

void validate(const GenParams& p) {
  if (p.nSats < 1) throw std::invalid_argument("nSats must be >= 1");
  if (p.nGPs < 0) throw std::invalid_argument("nGPs must be >= 0");
  if (p.horizonSeconds < 1)
    throw std::invalid_argument("horizonSeconds must be >= 1");
  if (p.anglesPerInstrument < 1 || p.anglesPerInstrument > 62)
    throw std::invalid_argument("anglesPerInstrument must be in [1, 62]");
  if (p.duplicationFactor < 1)
    throw std::invalid_argument("duplicationFactor must be >= 1");
  auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!frac(p.rainFraction) || !frac(p.saturationFraction) ||
      !frac(p.eclipseFraction))
    throw std::invalid_argument("fractions must be in [0, 1]");
}

std::ofstream openOut(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::string fmtErr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void writeMeasErr(const GenParams& p, Rng& rng, const fs::path& file) {
  auto out = openOut(file);
  out << "signature,biome,error\n";
  const int nAngles = p.anglesPerInstrument;
  for (int b = 0; b < 6; ++b) {
    const std::string biome = toString(static_cast<Biome>(b));
    std::vector<double> errL(nAngles), errP(nAngles);
    const double nadir = (nAngles - 1) / 2.0;
    for (int a = 0; a < nAngles; ++a) {
      // Error grows off-nadir well past the typical model priors: only
      // near-nadir looks (or rain-degraded GPs) usually beat the model, so
      // wide slanted footprints carry thin or zero rewards.
      const double off = std::abs(a - nadir) / nadir;
      errL[a] = 0.002 + 0.030 * off + 0.002 * rng.uniform01();
      errP[a] = 0.002 + 0.030 * off + 0.002 * rng.uniform01();
      out << "L@" << a << "," << biome << "," << fmtErr(errL[a]) << "\n";
      out << "P@" << a << "," << biome << "," << fmtErr(errP[a]) << "\n";
    }
    for (int a = 0; a < nAngles; ++a) {
      for (int c = 0; c < nAngles; ++c) {
        double comb =
            std::min(errL[a], errP[c]) * rng.uniformReal(0.55, 1.05);
        comb = std::clamp(comb, 0.001, 0.05);
        out << "L@" << a << "+P@" << c << "," << biome << ","
            << fmtErr(comb) << "\n";
      }
    }
  }
}

void writeSlew(const GenParams& p, const fs::path& file) {
  auto out = openOut(file);
  out << "fromAngle,toAngle,seconds,energy\n";
  const int nAngles = p.anglesPerInstrument;
  for (int from = 0; from < nAngles; ++from) {
    for (int to = 0; to < nAngles; ++to) {
      const int d = std::abs(from - to);
      const long long seconds = d == 0 ? 0 : 1 + d / 8;
      const double energy = d == 0 ? 0.0 : 0.0003 + 0.00012 * d;
      out << from << "," << to << "," << seconds << ","
          << fmtErr(energy) << "\n";
    }
  }
}

void writeGpDefs(const GenParams& p, Rng& rng, const fs::path& file) {
  auto out = openOut(file);
  out << "gpId,lat,lon,biome\n";
  for (long long i = 0; i < p.nGPs; ++i) {
    const double lat = -60.0 + 120.0 * rng.uniform01();
    const double lon = -180.0 + 360.0 *
                                   static_cast<double>(i) /
                                   static_cast<double>(std::max(1LL, p.nGPs));
    const Biome biome = static_cast<Biome>(rng.uniformInt(0, 5));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f", lat, lon);
    out << i << "," << buf << "," << toString(biome) << "\n";
  }
}

void writeGpSample(const std::set<long long>& sample, Rng& rng, Tick horizon,
                   bool withTicks, const fs::path& file,
                   const std::string& header) {
  auto out = openOut(file);
  out << header << "\n";
  for (long long gp : sample) {
    if (!withTicks) {
      out << gp << "\n";
      continue;
    }
    // Rain concentrates early in the horizon, so soaked GPs carry visibly
    // degraded model error for most of the planning window.
    const int events = static_cast<int>(rng.uniformInt(2, 5));
    const Tick span = std::max<Tick>(1, (3 * horizon) / 10);
    std::set<Tick> ticks;
    while (static_cast<int>(ticks.size()) < events)
      ticks.insert(rng.uniformInt(0, span - 1));
    for (Tick t : ticks) out << gp << "," << t << "\n";
  }
}

std::set<long long> sampleGps(Rng& rng, long long nGPs, double fraction) {
  std::set<long long> out;
  const long long want = static_cast<long long>(
      std::llround(fraction * static_cast<double>(nGPs)));
  while (static_cast<long long>(out.size()) < want)
    out.insert(rng.uniformInt(0, nGPs - 1));
  return out;
}

// Weather is spatially coherent: rain lands in short contiguous runs of
// adjacent ground positions rather than as isolated points.
std::set<long long> sampleGpRuns(Rng& rng, long long nGPs, double fraction,
                                 long long runLen) {
  std::set<long long> out;
  const long long want = static_cast<long long>(
      std::llround(fraction * static_cast<double>(nGPs)));
  while (static_cast<long long>(out.size()) < want) {
    const long long start = rng.uniformInt(0, nGPs - 1);
    for (long long i = 0;
         i < runLen && static_cast<long long>(out.size()) < want; ++i)
      out.insert((start + i) % nGPs);
  }
  return out;
}

// One satellite's imaging timepoints: clusters of nearby opportunities spread
// across the horizon, so slews sometimes bind between close-together
// opportunities and consecutive timepoints see overlapping ground windows.
std::vector<Tick> makeTicks(const GenParams& p, Rng& rng, int nTp) {
  std::set<Tick> ticks;
  const int nClusters = std::max(1, (nTp + 1) / 2);
  const Tick step = p.horizonSeconds / (nClusters + 1);
  for (int c = 0; c < nClusters && static_cast<int>(ticks.size()) < nTp; ++c) {
    Tick base = (c + 1) * step + rng.uniformInt(-step / 4, step / 4);
    base = std::clamp<Tick>(base, 0, p.horizonSeconds - 4);
    ticks.insert(base);
    if (static_cast<int>(ticks.size()) < nTp) {
      Tick buddy = base + rng.uniformInt(6, 40);
      if (buddy < p.horizonSeconds - 3) ticks.insert(buddy);
    }
  }
  while (static_cast<int>(ticks.size()) < nTp)
    ticks.insert(rng.uniformInt(0, p.horizonSeconds - 4));
  return {ticks.begin(), ticks.end()};
}

struct RawRecord {
  Tick tick;
  InstrumentId inst;
  int angle;
  std::vector<long long> gps;
};

void writeAccess(const GenParams& p, Rng& rng, int satId,
                 const fs::path& file) {
  // Reference density: roughly 9900 timepoints per satellite for a 1.66M-GP
  // deployment, scaled to this instance's GP count.
  int nTp = p.tpPerSat;
  if (nTp == 0)
    nTp = std::max(
        2, static_cast<int>(std::llround(static_cast<double>(p.nGPs) *
                                         9900.0 / 1662486.0)));
  if (p.nGPs == 0) nTp = 0;

  const std::vector<Tick> ticks = makeTicks(p, rng, nTp);
  const int nAngles = p.anglesPerInstrument;
  // meanChoicesPerTP = kL + kP + shared duals; kL = kP.
  const int kMean = std::max(
      1, static_cast<int>(std::llround((p.meanChoicesPerTP - 3.5) / 2.0)));
  const int kLo = std::max(1, kMean - 4);
  const int kHi = std::min(nAngles, kMean + 4);
  const long long window =
      std::clamp<long long>(p.nGPs / 10, 1, std::max<long long>(1, p.nGPs));

  std::vector<RawRecord> records;
  for (std::size_t ti = 0; ti < ticks.size(); ++ti) {
    const Tick tick = ticks[ti];
    // Ground swath sweeps forward with the orbit (several revolutions per
    // horizon); satellites are phased.
    const long long center =
        (p.nGPs * 11LL * ((tick + 997LL * satId) % p.horizonSeconds)) /
        p.horizonSeconds % p.nGPs;

    const int kL = static_cast<int>(rng.uniformInt(kLo, kHi));
    const int kP = static_cast<int>(rng.uniformInt(kLo, kHi));
    std::vector<int> anglesL = rng.sampleDistinct(kL, nAngles);
    // A few pointing angles are reachable by both instruments: those become
    // dual choices after flattening.
    int wantShared =
        std::min(kL, std::min(kP, static_cast<int>(rng.uniformInt(2, 5))));
    // Can't fill kP - shared non-shared slots from fewer than that many
    // L-free angles; bump the overlap instead.
    wantShared = std::max(wantShared, kP - (nAngles - kL));
    std::vector<int> anglesP;
    {
      std::set<int> setL(anglesL.begin(), anglesL.end());
      std::vector<int> pool = anglesL;
      std::set<int> chosen;
      for (int i = 0; i < wantShared; ++i) {
        int idx = static_cast<int>(
            rng.uniformInt(0, static_cast<long long>(pool.size()) - 1));
        chosen.insert(pool[idx]);
        pool.erase(pool.begin() + idx);
      }
      while (static_cast<int>(chosen.size()) < kP) {
        int a = static_cast<int>(rng.uniformInt(0, nAngles - 1));
        if (!setL.count(a)) chosen.insert(a);
      }
      anglesP.assign(chosen.begin(), chosen.end());
    }

    auto coverage = [&](int angle) {
      // Footprint position and size depend only on (tick, angle), so the L
      // and P swaths at a shared angle cover the same ground positions.
      Rng local(mix(mix(static_cast<std::uint64_t>(tick)) ^
                    static_cast<std::uint64_t>(angle * 2654435761ULL)));
      // Off-nadir slant widens the footprint (and, per the error table,
      // degrades the measurement).
      const double off =
          std::abs(angle - (nAngles - 1) / 2.0) / ((nAngles - 1) / 2.0);
      const long long fp =
          2 + static_cast<long long>(std::llround(18.0 * off)) +
          local.uniformInt(0, 1);
      // Scatter the footprint across the swath; nearby pointing angles need
      // not image nearby ground.
      const long long start =
          center + local.uniformInt(0, std::max<long long>(0, window - fp));
      std::vector<long long> gps;
      for (long long j = 0; j < fp; ++j)
        gps.push_back((start + j) % p.nGPs);
      std::sort(gps.begin(), gps.end());
      gps.erase(std::unique(gps.begin(), gps.end()), gps.end());
      return gps;
    };

    for (int a : anglesL)
      records.push_back({tick, InstrumentId::L, a, coverage(a)});
    for (int a : anglesP)
      records.push_back({tick, InstrumentId::P, a, coverage(a)});
  }

  // The raw feed reports each access duplicationFactor times, partitioning
  // the footprint across the copies; flattening merges them back.
  std::vector<RawRecord> expanded;
  for (const RawRecord& rec : records) {
    const int copies =
        std::min<int>(p.duplicationFactor, static_cast<int>(rec.gps.size()));
    if (copies <= 1) {
      expanded.push_back(rec);
      continue;
    }
    std::vector<std::vector<long long>> buckets(copies);
    for (std::size_t i = 0; i < rec.gps.size(); ++i)
      buckets[i % copies].push_back(rec.gps[i]);
    for (auto& bucket : buckets)
      expanded.push_back({rec.tick, rec.inst, rec.angle, std::move(bucket)});
  }
  std::stable_sort(expanded.begin(), expanded.end(),
                   [](const RawRecord& a, const RawRecord& b) {
                     return std::tie(a.tick, a.inst, a.angle) <
                            std::tie(b.tick, b.inst, b.angle);
                   });

  auto out = openOut(file);
  out << "tick,instrument,angle,gpIds\n";
  for (const RawRecord& rec : expanded) {
    out << rec.tick << "," << toString(rec.inst) << "," << rec.angle << ",";
    for (std::size_t i = 0; i < rec.gps.size(); ++i) {
      if (i) out << ";";
      out << rec.gps[i];
    }
    out << "\n";
  }
}

void writeConfig(const GenParams& p, Rng& rng, std::uint64_t seed,
                 const fs::path& file) {
  nlohmann::ordered_json j;
  j["horizonSeconds"] = p.horizonSeconds;
  j["energy"] = {{"minCharge", p.energy.minCharge},
                 {"imagingRate", p.energy.imagingRate},
                 {"solarRate", p.energy.solarRate},
                 {"initialCharge", p.energy.initialCharge}};
  j["dynamics"] = {{"driftRate", p.dynamics.driftRate},
                   {"rainBump", p.dynamics.rainBump},
                   {"cap", p.dynamics.cap}};
  j["initialError"] = {{"mean", p.initialErrorMean},
                       {"spread", p.initialErrorSpread},
                       {"seed", seed}};
  nlohmann::ordered_json eclipse = nlohmann::ordered_json::object();
  for (int satId = 1; satId <= p.nSats; ++satId) {
    const Tick len = static_cast<Tick>(
        p.eclipseFraction * static_cast<double>(p.horizonSeconds));
    nlohmann::ordered_json intervals = nlohmann::ordered_json::array();
    if (len > 0) {
      const Tick start = rng.uniformInt(0, p.horizonSeconds - len);
      intervals.push_back({start, start + len});
    }
    eclipse[std::to_string(satId)] = intervals;
  }
  j["eclipse"] = eclipse;
  auto out = openOut(file);
  out << j.dump(2) << "\n";
}

}  // namespace

void emitMeasurementErrors(const GenParams& params, std::uint64_t seed,
                           const fs::path& file) {
  validate(params);
  Rng rng(mix(seed ^ 0x6d656173ULL));
  writeMeasErr(params, rng, file);
}

void generateScenario(const GenParams& params, std::uint64_t seed,
                      const fs::path& outDir) {
  validate(params);
  fs::create_directories(outDir);

  {
    Rng rng(mix(seed ^ 0x67706465ULL));
    writeGpDefs(params, rng, outDir / "gp_defs.csv");
  }
  emitMeasurementErrors(params, seed, outDir / "meas_err.csv");
  writeSlew(params, outDir / "slew.csv");
  for (int satId = 1; satId <= params.nSats; ++satId) {
    Rng rng(mix(seed ^ (0xacce5500ULL + satId)));
    writeAccess(params, rng, satId,
                outDir / ("access_" + std::to_string(satId) + ".csv"));
  }
  {
    Rng rng(mix(seed ^ 0x7261696eULL));
    auto sample = params.nGPs == 0
                      ? std::set<long long>{}
                      : sampleGpRuns(rng, params.nGPs, params.rainFraction,
                                     params.rainRunLength);
    writeGpSample(sample, rng, params.horizonSeconds, true,
                  outDir / "rain.csv", "gpId,tick");
  }
  {
    Rng rng(mix(seed ^ 0x73617475ULL));
    auto sample = params.nGPs == 0
                      ? std::set<long long>{}
                      : sampleGps(rng, params.nGPs, params.saturationFraction);
    writeGpSample(sample, rng, params.horizonSeconds, false,
                  outDir / "saturation.csv", "gpId");
  }
  {
    Rng rng(mix(seed ^ 0x636f6e66ULL));
    writeConfig(params, rng, seed, outDir / "config.json");
  }
}

}  // namespace agiplan
