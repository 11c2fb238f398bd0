#include "io/plan_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "constraints/constraints.hpp"

namespace agiplan {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string formatDouble(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

namespace {

std::string commandLabel(const std::vector<InstrumentPair>& pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += '&';
    out += toString(pairs[i].inst);
    out += '.';
    out += std::to_string(pairs[i].angle);
  }
  return out;
}

std::vector<InstrumentPair> parseLabel(const std::string& label) {
  std::vector<InstrumentPair> pairs;
  std::size_t pos = 0;
  while (pos < label.size()) {
    std::size_t amp = label.find('&', pos);
    if (amp == std::string::npos) amp = label.size();
    std::size_t dot = label.find('.', pos);
    InstrumentPair p;
    p.inst = label[pos] == 'P' ? InstrumentId::P : InstrumentId::L;
    p.angle = std::stoi(label.substr(dot + 1, amp - dot - 1));
    pairs.push_back(p);
    pos = amp + 1;
  }
  return pairs;
}

}  // namespace

std::string emitPlanText(const Scenario& scenario, const Plan& plan,
                         int satId) {
  std::vector<const PlannedCommand*> images;
  for (const auto& cmd : plan.commands)
    if (cmd.satId == satId && cmd.type == CommandType::TakeImage)
      images.push_back(&cmd);
  std::sort(images.begin(), images.end(),
            [](const PlannedCommand* a, const PlannedCommand* b) {
              return a->start < b->start;
            });

  std::ostringstream out;
  out << "Time Command\n";
  int prevAngle = -1;
  Tick cursor = -1;
  for (const PlannedCommand* cmd : images) {
    const int angle = cmd->pairs.front().angle;
    if (cursor >= 0) {
      Tick slewSeconds = 0;
      if (prevAngle != angle)
        slewSeconds = scenario.slew.lookup(prevAngle, angle).seconds;
      // The slew ends right before the next image starts.
      Tick slewStart = cmd->start - slewSeconds;
      if (slewStart > cursor)
        out << "[" << cursor << "-" << slewStart - 1 << "] Idle\n";
      if (slewSeconds > 0)
        out << "[" << slewStart << "-" << cmd->start - 1 << "] Slew\n";
    }
    out << "[" << cmd->start << "-" << cmd->end - 1 << "] "
        << commandLabel(cmd->pairs) << "\n";
    cursor = cmd->end;
    prevAngle = angle;
  }
  return out.str();
}

std::vector<PlannedCommand> parsePlanText(const std::string& text, int satId) {
  std::vector<PlannedCommand> images;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '[') continue;
    std::size_t dash = line.find('-');
    std::size_t close = line.find(']');
    Tick start = std::stoi(line.substr(1, dash - 1));
    Tick end = std::stoi(line.substr(dash + 1, close - dash - 1)) + 1;
    std::string label = line.substr(close + 2);
    if (!label.empty() && label.back() == '\r') label.pop_back();
    if (label == "Idle" || label == "Slew") continue;
    PlannedCommand cmd;
    cmd.satId = satId;
    cmd.start = start;
    cmd.end = end;
    cmd.type = CommandType::TakeImage;
    cmd.pairs = parseLabel(label);
    images.push_back(cmd);
  }
  return images;
}

std::string emitPlanJson(const Plan& plan) {
  std::ostringstream out;
  json meta;
  meta["type"] = "meta";
  meta["planScore"] = plan.planScore;
  json reservations = json::array();
  for (const auto& r : plan.fulfilledReservations) {
    reservations.push_back({{"id", r.id},
                            {"sat", r.satId},
                            {"earliest", r.earliest},
                            {"latest", r.latest},
                            {"inst", toString(r.requiredInstrument)},
                            {"gp", r.gp},
                            {"firstTick", r.firstTick},
                            {"firstSig", r.firstSignature},
                            {"firstErr", r.firstError}});
  }
  meta["reservations"] = reservations;
  out << meta.dump() << "\n";

  for (const auto& cmd : plan.commands) {
    json jc;
    jc["type"] = "cmd";
    jc["sat"] = cmd.satId;
    jc["start"] = cmd.start;
    jc["end"] = cmd.end;
    jc["sig"] = makeSignature(cmd.pairs);
    jc["gps"] = cmd.rewardedGps;
    jc["reward"] = cmd.reward;
    jc["resIds"] = cmd.reservationIds;
    jc["pass"] = cmd.pass;
    out << jc.dump() << "\n";
  }
  return out.str();
}

Plan parsePlanJson(const std::string& text) {
  Plan plan;
  bool sawMeta = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.at("type") == "meta") {
      sawMeta = true;
      plan.planScore = j.at("planScore").get<double>();
      for (const auto& jr : j.at("reservations")) {
        Reservation r;
        r.id = jr.at("id").get<int>();
        r.satId = jr.at("sat").get<int>();
        r.earliest = jr.at("earliest").get<Tick>();
        r.latest = jr.at("latest").get<Tick>();
        r.requiredInstrument =
            *instrumentFromString(jr.at("inst").get<std::string>());
        r.gp = jr.at("gp").get<GpId>();
        r.firstTick = jr.at("firstTick").get<Tick>();
        r.firstSignature = jr.at("firstSig").get<std::string>();
        r.firstError = jr.at("firstErr").get<double>();
        plan.fulfilledReservations.push_back(r);
      }
    } else {
      PlannedCommand cmd;
      cmd.satId = j.at("sat").get<int>();
      cmd.start = j.at("start").get<Tick>();
      cmd.end = j.at("end").get<Tick>();
      cmd.type = CommandType::TakeImage;
      cmd.pairs = parseSignature(j.at("sig").get<std::string>());
      cmd.rewardedGps = j.at("gps").get<std::vector<GpId>>();
      cmd.reward = j.at("reward").get<double>();
      cmd.reservationIds = j.at("resIds").get<std::vector<int>>();
      cmd.pass = j.at("pass").get<int>();
      plan.commands.push_back(cmd);
    }
  }
  if (!sawMeta)
    throw std::runtime_error("plan file has no meta record; not a plan.jsonl");
  return plan;
}

void writePlanFiles(const Scenario& scenario, const Plan& plan,
                    const fs::path& outDir) {
  fs::create_directories(outDir);
  for (int satId : scenario.satIds) {
    std::ofstream out(outDir / ("plan_" + std::to_string(satId) + ".txt"));
    out << emitPlanText(scenario, plan, satId);
  }
  std::ofstream out(outDir / "plan.jsonl");
  out << emitPlanJson(plan);
}

Plan readPlanFile(const fs::path& planJsonl) {
  std::ifstream in(planJsonl);
  if (!in) throw std::runtime_error("cannot open " + planJsonl.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parsePlanJson(buf.str());
}

std::string metricsCsvHeader() {
  return "heuristic,global,beamWidth,passes,planScore,gpObserved,"
         "avgErrPerObservedGP,imageCount,nodesCreated,truncated";
}

std::string metricsCsvLine(const MetricsRow& row) {
  std::ostringstream os;
  os << row.heuristic << ',' << row.global << ',' << row.beamWidth << ','
     << row.passes << ',' << formatDouble(row.metrics.planScore) << ','
     << row.metrics.gpObserved << ','
     << formatDouble(row.metrics.avgErrPerObservedGP) << ','
     << row.metrics.imageCount << ',' << row.metrics.nodesCreated << ','
     << (row.metrics.truncated ? 1 : 0);
  return os.str();
}

void appendMetricsCsv(const fs::path& csvPath, const MetricsRow& row) {
  const bool writeHeader = !fs::exists(csvPath);
  std::ofstream out(csvPath, std::ios::app);
  if (writeHeader) out << metricsCsvHeader() << "\n";
  out << metricsCsvLine(row) << "\n";
}

}  // namespace agiplan
