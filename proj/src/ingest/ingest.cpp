#include "ingest/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "multipass/cohorts.hpp"

namespace agiplan {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const fs::path& file, std::size_t line,
                       const std::string& what) {
  std::ostringstream os;
  os << file.string() << ":" << line << ": " << what;
  throw IngestError(os.str());
}

std::vector<std::string> splitCsv(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

long long parseInt(const std::string& s, const fs::path& file,
                   std::size_t line) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(file, line, "expected integer, got '" + s + "'");
  return v;
}

double parseDouble(const std::string& s, const fs::path& file,
                   std::size_t line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(file, line, "expected number, got '" + s + "'");
  }
}

class CsvReader {
 public:
  CsvReader(const fs::path& file, const std::string& expectedHeader)
      : file_(file), in_(file) {
    if (!in_) throw IngestError("missing file: " + file.string());
    std::string header;
    if (!std::getline(in_, header))
      fail(file_, 1, "empty file, expected header '" + expectedHeader + "'");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != expectedHeader)
      fail(file_, 1, "bad header '" + header + "', expected '" +
                         expectedHeader + "'");
  }

  bool next(std::vector<std::string>& fields, std::size_t expectedCount) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineNo_;
      if (line.empty() || line == "\r") continue;
      fields = splitCsv(line);
      if (fields.size() != expectedCount)
        fail(file_, lineNo_, "expected " + std::to_string(expectedCount) +
                                 " fields, got " +
                                 std::to_string(fields.size()));
      return true;
    }
    return false;
  }

  const fs::path& file() const { return file_; }
  std::size_t line() const { return lineNo_; }

 private:
  fs::path file_;
  std::ifstream in_;
  std::size_t lineNo_ = 1;
};

void parseGpDefs(const fs::path& file, RawScenario& raw) {
  CsvReader r(file, "gpId,lat,lon,biome");
  std::vector<std::string> f;
  while (r.next(f, 4)) {
    GroundPosition gp;
    gp.id = parseInt(f[0], file, r.line());
    gp.lat = parseDouble(f[1], file, r.line());
    gp.lon = parseDouble(f[2], file, r.line());
    auto biome = biomeFromString(f[3]);
    if (!biome) fail(file, r.line(), "unknown biome '" + f[3] + "'");
    gp.biome = *biome;
    if (raw.gpById.count(gp.id))
      fail(file, r.line(), "duplicate gpId " + std::to_string(gp.id));
    raw.gpById[gp.id] = raw.gps.size();
    raw.gps.push_back(gp);
  }
}

void parseAccess(const fs::path& file, int satId, RawScenario& raw) {
  CsvReader r(file, "tick,instrument,angle,gpIds");
  std::vector<std::string> f;
  auto& records = raw.accessBySat[satId];
  while (r.next(f, 4)) {
    RawAccessRecord rec;
    rec.satId = satId;
    rec.tick = static_cast<Tick>(parseInt(f[0], file, r.line()));
    auto inst = instrumentFromString(f[1]);
    if (!inst) fail(file, r.line(), "unknown instrument '" + f[1] + "'");
    rec.inst = *inst;
    rec.angle = static_cast<int>(parseInt(f[2], file, r.line()));
    if (rec.angle < 0 || rec.angle > 61)
      fail(file, r.line(), "angle out of range: " + f[2]);
    for (const auto& part : splitCsv(f[3], ';')) {
      if (part.empty()) continue;
      GpId id = parseInt(part, file, r.line());
      if (!raw.gpById.count(id))
        fail(file, r.line(),
             "access record references unknown GP " + std::to_string(id));
      rec.gps.push_back(id);
    }
    if (rec.gps.empty()) fail(file, r.line(), "empty GP list");
    records.push_back(rec);
    ++raw.rawChoiceCount;
  }
}

void parseRain(const fs::path& file, RawScenario& raw) {
  CsvReader r(file, "gpId,tick");
  std::vector<std::string> f;
  while (r.next(f, 2)) {
    GpId id = parseInt(f[0], file, r.line());
    if (!raw.gpById.count(id))
      fail(file, r.line(), "rain record references unknown GP " + f[0]);
    raw.rainEvents[id].push_back(
        static_cast<Tick>(parseInt(f[1], file, r.line())));
  }
  for (auto& [id, ticks] : raw.rainEvents) std::sort(ticks.begin(), ticks.end());
}

void parseSaturation(const fs::path& file, RawScenario& raw) {
  CsvReader r(file, "gpId");
  std::vector<std::string> f;
  while (r.next(f, 1)) {
    GpId id = parseInt(f[0], file, r.line());
    if (!raw.gpById.count(id))
      fail(file, r.line(), "saturation record references unknown GP " + f[0]);
    raw.saturated.insert(id);
  }
}

void parseMeasErr(const fs::path& file, RawScenario& raw) {
  CsvReader r(file, "signature,biome,error");
  std::vector<std::string> f;
  while (r.next(f, 3)) {
    auto biome = biomeFromString(f[1]);
    if (!biome) fail(file, r.line(), "unknown biome '" + f[1] + "'");
    double err = parseDouble(f[2], file, r.line());
    if (err < 0) fail(file, r.line(), "negative measurement error");
    raw.errTable.set(f[0], *biome, err);
  }
}

void parseSlew(const fs::path& file, RawScenario& raw) {
  CsvReader r(file, "fromAngle,toAngle,seconds,energy");
  std::vector<std::string> f;
  while (r.next(f, 4)) {
    int from = static_cast<int>(parseInt(f[0], file, r.line()));
    int to = static_cast<int>(parseInt(f[1], file, r.line()));
    int sec = static_cast<int>(parseInt(f[2], file, r.line()));
    double energy = parseDouble(f[3], file, r.line());
    if (sec < 0 || energy < 0) fail(file, r.line(), "negative slew cost");
    raw.slew.set(from, to, sec, energy);
  }
  // Auto-fill missing diagonal entries with identity slews.
  for (int a = 0; a <= 61; ++a)
    if (!raw.slew.has(a, a)) raw.slew.set(a, a, 0, 0.0);
  if (auto err = raw.slew.validateMonotone())
    throw IngestError(file.string() + ": " + *err);
}

void parseConfig(const fs::path& file, RawScenario& raw) {
  std::ifstream in(file);
  if (!in) return;  // optional; defaults apply
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IngestError(file.string() + ": " + e.what());
  }
  raw.horizon = j.value("horizonSeconds", raw.horizon);
  if (j.contains("energy")) {
    const auto& e = j["energy"];
    raw.energy.minCharge = e.value("minCharge", raw.energy.minCharge);
    raw.energy.imagingRate = e.value("imagingRate", raw.energy.imagingRate);
    raw.energy.solarRate = e.value("solarRate", raw.energy.solarRate);
    raw.energy.initialCharge =
        e.value("initialCharge", raw.energy.initialCharge);
  }
  if (j.contains("dynamics")) {
    const auto& d = j["dynamics"];
    raw.dynamics.driftRate = d.value("driftRate", raw.dynamics.driftRate);
    raw.dynamics.rainBump = d.value("rainBump", raw.dynamics.rainBump);
    raw.dynamics.cap = d.value("cap", raw.dynamics.cap);
  }
  if (j.contains("initialError")) {
    const auto& e = j["initialError"];
    raw.initialError.mean = e.value("mean", raw.initialError.mean);
    raw.initialError.spread = e.value("spread", raw.initialError.spread);
    raw.initialError.seed = e.value("seed", raw.initialError.seed);
  }
  if (j.contains("eclipse")) {
    for (auto& [sat, intervals] : j["eclipse"].items()) {
      auto& list = raw.eclipse[std::stoi(sat)];
      for (const auto& iv : intervals)
        list.emplace_back(iv.at(0).get<Tick>(), iv.at(1).get<Tick>());
      std::sort(list.begin(), list.end());
    }
  }
  if (j.contains("lastObserved")) {
    for (auto& [gp, tick] : j["lastObserved"].items())
      raw.lastObserved[std::stoll(gp)] = tick.get<Tick>();
  }
}

}  // namespace

RawScenario parseScenario(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw IngestError("scenario directory not found: " + dir.string());
  RawScenario raw;
  parseGpDefs(dir / "gp_defs.csv", raw);
  parseConfig(dir / "config.json", raw);

  std::vector<std::pair<int, fs::path>> accessFiles;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("access_", 0) == 0 && name.size() > 11 &&
        name.substr(name.size() - 4) == ".csv") {
      accessFiles.emplace_back(
          std::stoi(name.substr(7, name.size() - 11)), entry.path());
    }
  }
  if (accessFiles.empty())
    throw IngestError("no access_<satId>.csv files in " + dir.string());
  std::sort(accessFiles.begin(), accessFiles.end());
  for (const auto& [satId, path] : accessFiles) parseAccess(path, satId, raw);

  parseRain(dir / "rain.csv", raw);
  parseSaturation(dir / "saturation.csv", raw);
  parseMeasErr(dir / "meas_err.csv", raw);
  parseSlew(dir / "slew.csv", raw);

  for (auto& gp : raw.gps)
    gp.modelError = initialModelError(gp.id, raw.initialError);
  return raw;
}

std::vector<TimepointVariable> flattenChoices(
    const std::vector<RawAccessRecord>& satRecords) {
  // (tick, inst, angle) -> unioned GP set
  std::map<std::tuple<Tick, int, int>, std::set<GpId>> merged;
  for (const auto& rec : satRecords) {
    auto& gps = merged[{rec.tick, static_cast<int>(rec.inst), rec.angle}];
    gps.insert(rec.gps.begin(), rec.gps.end());
  }

  std::map<Tick, std::vector<CommandChoice>> byTick;
  for (const auto& [key, gps] : merged) {
    auto [tick, inst, angle] = key;
    CommandChoice c;
    c.pairs = {{static_cast<InstrumentId>(inst), angle}};
    c.covered.assign(gps.begin(), gps.end());
    byTick[tick].push_back(std::move(c));
  }

  // Synthesize dual-instrument choices where both instruments share an angle
  // at one tick. The dual covers the GPs imaged by both.
  for (auto& [tick, choices] : byTick) {
    std::vector<CommandChoice> duals;
    for (const auto& a : choices) {
      if (a.pairs[0].inst != InstrumentId::L) continue;
      for (const auto& b : choices) {
        if (b.pairs[0].inst != InstrumentId::P ||
            b.pairs[0].angle != a.pairs[0].angle)
          continue;
        CommandChoice dual;
        dual.pairs = {a.pairs[0], b.pairs[0]};
        std::set_intersection(a.covered.begin(), a.covered.end(),
                              b.covered.begin(), b.covered.end(),
                              std::back_inserter(dual.covered));
        if (!dual.covered.empty()) duals.push_back(std::move(dual));
      }
    }
    choices.insert(choices.end(), duals.begin(), duals.end());
    std::sort(choices.begin(), choices.end(),
              [](const CommandChoice& x, const CommandChoice& y) {
                return x.signature() < y.signature();
              });
  }

  std::vector<TimepointVariable> out;
  const int satId = satRecords.empty() ? 0 : satRecords.front().satId;
  for (auto& [tick, choices] : byTick) {
    TimepointVariable var;
    var.satId = satId;
    var.tick = tick;
    var.domain = std::move(choices);
    out.push_back(std::move(var));
  }
  return out;
}

GPChoiceIndex buildGPChoiceIndex(
    const std::vector<TimepointVariable>& variables,
    const MeasurementErrorTable& errTable,
    const std::vector<GroundPosition>& gps,
    const std::unordered_map<GpId, std::size_t>& gpById) {
  GPChoiceIndex index;
  for (const auto& var : variables) {
    for (const auto& choice : var.domain) {
      const std::string sig = choice.signature();
      for (GpId id : choice.covered) {
        const GroundPosition& gp = gps[gpById.at(id)];
        auto err = errTable.lookup(sig, gp.biome);
        if (!err)
          throw IngestError("missing measurement-error entry for signature " +
                            sig + ", biome " + toString(gp.biome));
        index[id].push_back(GPChoiceOption{var.satId, var.tick, sig, *err});
      }
    }
  }
  for (auto& [id, options] : index) {
    std::sort(options.begin(), options.end(),
              [](const GPChoiceOption& a, const GPChoiceOption& b) {
                return std::tie(a.error, a.tick, a.satId, a.signature) <
                       std::tie(b.error, b.tick, b.satId, b.signature);
              });
  }
  return index;
}

Scenario buildScenario(const RawScenario& raw) {
  Scenario s;
  s.gps = raw.gps;
  s.gpById = raw.gpById;
  s.errTable = raw.errTable;
  s.slew = raw.slew;
  s.rainEvents = raw.rainEvents;
  s.saturated = raw.saturated;
  s.energy = raw.energy;
  s.eclipse = raw.eclipse;
  s.dynamics = raw.dynamics;
  s.horizon = raw.horizon;

  assignCohorts(s.gps, raw.rainEvents, raw.saturated);
  for (auto& gp : s.gps) {
    auto it = raw.lastObserved.find(gp.id);
    if (it != raw.lastObserved.end()) gp.lastObservedTick = it->second;
  }

  // GPs observed within the last 24 hours are excluded from coverage.
  std::set<GpId> excluded;
  for (const auto& gp : s.gps)
    if (gp.lastObservedTick && *gp.lastObservedTick > -86400)
      excluded.insert(gp.id);

  for (const auto& [satId, records] : raw.accessBySat) {
    s.satIds.push_back(satId);
    for (auto& var : flattenChoices(records)) {
      if (!excluded.empty()) {
        for (auto& choice : var.domain) {
          std::erase_if(choice.covered,
                        [&](GpId id) { return excluded.count(id) > 0; });
        }
        std::erase_if(var.domain, [](const CommandChoice& c) {
          return c.covered.empty();
        });
      }
      if (!var.domain.empty()) s.variables.push_back(std::move(var));
    }
  }
  std::sort(s.variables.begin(), s.variables.end(),
            [](const TimepointVariable& a, const TimepointVariable& b) {
              return std::tie(a.tick, a.satId) < std::tie(b.tick, b.satId);
            });

  s.gpChoices = buildGPChoiceIndex(s.variables, s.errTable, s.gps, s.gpById);

  // Static 1-based ranks; equal errors share the lower position.
  for (const auto& [id, options] : s.gpChoices) {
    s.gpChoiceCount[id] = options.size();
    auto& ranks = s.gpChoiceRank[id];
    int pos = 0;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (i == 0 || options[i].error != options[i - 1].error)
        pos = static_cast<int>(i) + 1;
      ranks[Scenario::rankKey(options[i].satId, options[i].tick,
                              options[i].signature)] = pos;
    }
  }
  return s;
}

std::size_t flattenedChoiceCount(const Scenario& scenario) {
  std::size_t n = 0;
  for (const auto& var : scenario.variables) n += var.domain.size();
  return n;
}

void emitPlannerInputs(const Scenario& scenario, const fs::path& outDir) {
  fs::create_directories(outDir);
  using json = nlohmann::ordered_json;

  for (int satId : scenario.satIds) {
    std::ofstream out(outDir /
                      ("tp_choices_" + std::to_string(satId) + ".jsonl"));
    for (const auto& var : scenario.variables) {
      if (var.satId != satId) continue;
      json line;
      line["sat"] = var.satId;
      line["tick"] = var.tick;
      json choices = json::array();
      for (const auto& c : var.domain) {
        json jc;
        jc["sig"] = c.signature();
        json pairs = json::array();
        for (const auto& p : c.pairs)
          pairs.push_back({{"inst", toString(p.inst)}, {"angle", p.angle}});
        jc["pairs"] = pairs;
        jc["gps"] = c.covered;
        choices.push_back(jc);
      }
      line["choices"] = choices;
      out << line.dump() << "\n";
    }
  }

  std::ofstream out(outDir / "gp_choices.jsonl");
  for (const auto& [id, options] : scenario.gpChoices) {
    json line;
    line["gp"] = id;
    json opts = json::array();
    for (const auto& o : options) {
      opts.push_back({{"sat", o.satId},
                      {"tick", o.tick},
                      {"sig", o.signature},
                      {"err", o.error}});
    }
    line["options"] = opts;
    out << line.dump() << "\n";
  }
}

}  // namespace agiplan
