#include "constraints/constraints.hpp"

#include <algorithm>
#include <cassert>

namespace agiplan {

namespace {

constexpr Tick kImageLock = 3;
constexpr Tick kFollowupWindow = 7200;

const TimepointVariable& proto(const RunContext& ctx, const OpenVar& var) {
  return (*ctx.variables)[var.varIdx];
}

const CommandChoice& protoChoice(const RunContext& ctx, const OpenVar& var,
                                 const OpenChoice& choice) {
  return proto(ctx, var).domain[choice.protoIdx];
}

// Does an active reservation credit this (gp, variable, choice)?
const Reservation* matchReservation(const RunContext& ctx,
                                    const SearchState& state, GpId gp,
                                    const OpenVar& var,
                                    const CommandChoice& cmd) {
  if (cmd.pairs.size() != 1) return nullptr;
  const TimepointVariable& tv = proto(ctx, var);
  for (const auto& res : state.activeReservations) {
    if (res.gp == gp && res.satId == tv.satId && tv.tick >= res.earliest &&
        tv.tick <= res.latest && cmd.pairs[0].inst == res.requiredInstrument)
      return &res;
  }
  return nullptr;
}

double combinedError(const Scenario& scenario, const std::string& firstSig,
                     const std::vector<InstrumentPair>& secondPairs,
                     Biome biome, bool& ok) {
  std::vector<InstrumentPair> pairs = parseSignature(firstSig);
  pairs.insert(pairs.end(), secondPairs.begin(), secondPairs.end());
  auto err = scenario.errTable.lookup(makeSignature(pairs), biome);
  ok = err.has_value();
  return ok ? *err : 0.0;
}

}  // namespace

std::vector<InstrumentPair> parseSignature(const std::string& sig) {
  std::vector<InstrumentPair> pairs;
  std::size_t pos = 0;
  while (pos < sig.size()) {
    std::size_t plus = sig.find('+', pos);
    if (plus == std::string::npos) plus = sig.size();
    std::size_t at = sig.find('@', pos);
    InstrumentPair p;
    p.inst = sig[pos] == 'P' ? InstrumentId::P : InstrumentId::L;
    p.angle = std::stoi(sig.substr(at + 1, plus - at - 1));
    pairs.push_back(p);
    pos = plus + 1;
  }
  return pairs;
}

Tick sunlitSeconds(const Scenario& scenario, int satId, Tick fromTick,
                   Tick toTick) {
  if (toTick <= fromTick) return 0;
  Tick sunlit = toTick - fromTick;
  auto it = scenario.eclipse.find(satId);
  if (it == scenario.eclipse.end()) return sunlit;
  for (const auto& [a, b] : it->second) {
    Tick lo = std::max(a, fromTick);
    Tick hi = std::min(b, toTick);
    if (hi > lo) sunlit -= hi - lo;
  }
  return sunlit;
}

double choiceReward(const RunContext& ctx, const SearchState& state,
                    const OpenVar& var, const OpenChoice& choice) {
  const Scenario& sc = *ctx.scenario;
  const TimepointVariable& tv = proto(ctx, var);
  const CommandChoice& cmd = protoChoice(ctx, var, choice);
  const std::string sig = cmd.signature();
  double reward = 0.0;
  for (GpId gp : choice.covered) {
    if (const Reservation* res = matchReservation(ctx, state, gp, var, cmd)) {
      bool ok = false;
      double comb =
          combinedError(sc, res->firstSignature, cmd.pairs, sc.gp(gp).biome, ok);
      if (ok) reward += gpReward(res->firstError, comb);
      continue;
    }
    if (ctx.cohortFilterEnabled && !ctx.cohortFilter.count(gp)) continue;
    double prior = sc.priorErrorAt(gp, tv.tick);
    double meas = sc.errTable.lookup(sig, sc.gp(gp).biome).value_or(prior);
    reward += gpReward(prior, meas);
  }
  return reward;
}

SearchState makeRootState(const RunContext& ctx) {
  const Scenario& sc = *ctx.scenario;
  SearchState root;

  std::set<int> sats;
  for (const auto& var : *ctx.variables) sats.insert(var.satId);
  for (int satId : sc.satIds) sats.insert(satId);
  for (int satId : sats) {
    SatState ss;
    auto it = ctx.boundary.find(satId);
    if (it != ctx.boundary.end()) {
      ss.charge = it->second.charge;
      ss.lastEnd = it->second.lastEnd;
      ss.lastAngle = it->second.lastAngle;
    } else {
      ss.charge = sc.energy.initialCharge;
      ss.lastEnd = 0;
      ss.lastAngle = -1;
    }
    root.sats[satId] = ss;
  }

  for (std::size_t i = 0; i < ctx.variables->size(); ++i) {
    const TimepointVariable& tv = (*ctx.variables)[i];
    const SatState& ss = root.sats.at(tv.satId);
    const RunContext::SatBoundary* sb = nullptr;
    if (auto it = ctx.boundary.find(tv.satId); it != ctx.boundary.end())
      sb = &it->second;

    OpenVar open;
    open.varIdx = static_cast<int>(i);
    for (std::size_t j = 0; j < tv.domain.size(); ++j) {
      const CommandChoice& cmd = tv.domain[j];
      // Entry slew reachability from the boundary pointing state.
      Tick earliest = ss.lastEnd;
      if (ss.lastAngle >= 0 && ss.lastAngle != cmd.angle())
        earliest += sc.slew.lookup(ss.lastAngle, cmd.angle()).seconds;
      if (tv.tick < earliest) continue;
      // Exit slew must fit before the gap closes.
      if (sb && sb->hasExit) {
        Tick exitCost = sb->exitAngle >= 0 && sb->exitAngle != cmd.angle()
                            ? sc.slew.lookup(cmd.angle(), sb->exitAngle).seconds
                            : 0;
        if (tv.tick + kImageLock + exitCost > sb->endTick) continue;
      }

      OpenChoice oc;
      oc.protoIdx = static_cast<int>(j);
      for (GpId gp : cmd.covered)
        if (!ctx.preObserved.count(gp)) oc.covered.push_back(gp);
      if (oc.covered.empty()) continue;
      if (ctx.cohortFilterEnabled) {
        bool hit = std::any_of(oc.covered.begin(), oc.covered.end(),
                               [&](GpId gp) { return ctx.cohortFilter.count(gp); });
        if (!hit) continue;
      }
      open.domain.push_back(std::move(oc));
    }
    if (!open.domain.empty()) root.open.push_back(std::move(open));
  }
  return root;
}

SearchState applyChoice(const RunContext& ctx, const SearchState& state,
                        int varPos, int choiceIdx) {
  const Scenario& sc = *ctx.scenario;
  SearchState ns = state;

  OpenVar assigned = ns.open[varPos];
  const TimepointVariable& tv = proto(ctx, assigned);
  const OpenChoice chosen = assigned.domain[choiceIdx];
  const CommandChoice& cmd = protoChoice(ctx, assigned, chosen);
  const int satId = tv.satId;
  const Tick t = tv.tick;
  const int angle = cmd.angle();
  const std::string sig = cmd.signature();

  // Reservations whose window has passed can no longer be fulfilled.
  std::erase_if(ns.activeReservations,
                [&](const Reservation& r) { return r.latest < t; });

  // Energy checkpoint at the command boundary.
  SatState& ss = ns.sats.at(satId);
  if (!ctx.ignoreSolar) {
    ss.charge = std::min(
        1.0, ss.charge + sc.energy.solarRate *
                             sunlitSeconds(sc, satId, ss.lastEnd, t + kImageLock));
  }
  SlewEntry slew{0, 0.0};
  if (ss.lastAngle >= 0 && ss.lastAngle != angle) {
    slew = sc.slew.lookup(ss.lastAngle, angle);
    assert(t >= ss.lastEnd + slew.seconds);
    ss.charge -= slew.energy;
  }
  ss.charge -= sc.energy.imagingRate * kImageLock *
               static_cast<double>(cmd.pairs.size());

  // Rewards against node-current prior errors.
  PlannedCommand step;
  step.satId = satId;
  step.start = t;
  step.end = t + kImageLock;
  step.type = CommandType::TakeImage;
  step.pairs = cmd.pairs;
  step.pass = ctx.pass;
  struct Credit {
    GpId gp;
    double reward;
    bool viaReservation;
    bool failed = false;  // measurement did not beat the model prior
  };
  std::vector<Credit> credits;
  for (GpId gp : chosen.covered) {
    if (const Reservation* res = matchReservation(ctx, ns, gp, assigned, cmd)) {
      bool ok = false;
      double comb = combinedError(sc, res->firstSignature, cmd.pairs,
                                  sc.gp(gp).biome, ok);
      double rw = ok ? gpReward(res->firstError, comb) : 0.0;
      ns.observed[gp] = ok ? comb : res->firstError;
      step.reward += rw;
      step.reservationIds.push_back(res->id);
      ns.fulfilledReservations.push_back(*res);
      std::erase_if(ns.activeReservations,
                    [&](const Reservation& r) { return r.id == res->id; });
      credits.push_back({gp, rw, true});
      continue;
    }
    double prior = sc.priorErrorAt(gp, t);
    double meas = sc.errTable.lookup(sig, sc.gp(gp).biome).value_or(prior);
    double rw = gpReward(prior, meas);
    const bool failed = rw <= 0.0;
    if (ctx.cohortFilterEnabled && !ctx.cohortFilter.count(gp)) rw = 0.0;
    ns.observed[gp] = meas;
    step.reward += rw;
    credits.push_back({gp, rw, false, failed});
  }
  step.rewardedGps = chosen.covered;
  ns.score += step.reward;
  ns.steps.push_back(step);

  ss.lastEnd = t + kImageLock;
  ss.lastAngle = angle;

  ns.open.erase(ns.open.begin() + varPos);

  // Image lock: nothing else on this satellite during the 3-second hold.
  std::erase_if(ns.open, [&](const OpenVar& v) {
    const TimepointVariable& p = proto(ctx, v);
    return p.satId == satId && p.tick > t && p.tick < t + kImageLock;
  });

  // Slew reachability for this satellite's future choices.
  for (auto& v : ns.open) {
    const TimepointVariable& p = proto(ctx, v);
    if (p.satId != satId) continue;
    std::erase_if(v.domain, [&](const OpenChoice& oc) {
      int a = p.domain[oc.protoIdx].angle();
      Tick earliest = t + kImageLock;
      if (a != angle) earliest += sc.slew.lookup(angle, a).seconds;
      return p.tick < earliest;
    });
  }
  std::erase_if(ns.open, [](const OpenVar& v) { return v.domain.empty(); });

  // Follow-up reservations, before duplicate removal so the retained
  // (choice, GP) pairs survive it.
  // At most one reservation per command, and only when the command was a
  // total loss (no covered GP beat its prior): rescue the failed observation
  // with the largest recoverable gain.
  if (ctx.config.followupEnabled && cmd.pairs.size() == 1 &&
      step.reward <= 0.0) {
    const InstrumentId firstInst = cmd.pairs[0].inst;
    struct Candidate {
      GpId gp = 0;
      double firstErr = 0.0;
      double comb = 0.0;
      const GPChoiceOption* opt = nullptr;
      std::vector<OpenVar>::iterator target;
      std::vector<OpenChoice>::iterator choice;
    };
    std::optional<Candidate> best;
    for (const Credit& credit : credits) {
      if (credit.viaReservation || !credit.failed) continue;
      const GpId gp = credit.gp;
      auto optIt = sc.gpChoices.find(gp);
      if (optIt == sc.gpChoices.end()) continue;
      double firstErr = ns.observed.at(gp);
      if (firstErr <= 0.0) continue;

      // Among qualifying follow-ups prefer the one that constrains the
      // mission least (widest remaining coverage), then the lowest combined
      // error.
      const GPChoiceOption* bestOpt = nullptr;
      double bestComb = 0.0;
      std::size_t bestWidth = 0;
      std::vector<OpenVar>::iterator bestTarget;
      std::vector<OpenChoice>::iterator bestChoice;
      for (const auto& opt : optIt->second) {
        if (opt.tick <= t || opt.tick > t + kFollowupWindow) continue;
        std::vector<InstrumentPair> optPairs = parseSignature(opt.signature);
        if (optPairs.size() != 1 || optPairs[0].inst == firstInst) continue;
        bool ok = false;
        double comb = combinedError(sc, sig, optPairs, sc.gp(gp).biome, ok);
        if (!ok) continue;
        if (comb > (1.0 - ctx.config.followupGainThreshold) * firstErr) continue;

        // Target variable must still be open, without a conflicting
        // reservation.
        auto targetPos =
            std::find_if(ns.open.begin(), ns.open.end(), [&](const OpenVar& v) {
              const TimepointVariable& p = proto(ctx, v);
              return p.satId == opt.satId && p.tick == opt.tick;
            });
        if (targetPos == ns.open.end()) continue;
        bool conflicting = std::any_of(
            ns.activeReservations.begin(), ns.activeReservations.end(),
            [&](const Reservation& r) {
              return r.satId == opt.satId && opt.tick >= r.earliest &&
                     opt.tick <= r.latest && r.firstSignature != sig;
            });
        if (conflicting) continue;
        auto choiceIt = std::find_if(
            targetPos->domain.begin(), targetPos->domain.end(),
            [&](const OpenChoice& oc) {
              return proto(ctx, *targetPos).domain[oc.protoIdx].signature() ==
                         opt.signature &&
                     std::binary_search(oc.covered.begin(), oc.covered.end(),
                                        gp);
            });
        if (choiceIt == targetPos->domain.end()) continue;

        const std::size_t width = choiceIt->covered.size();
        if (!bestOpt || width > bestWidth ||
            (width == bestWidth && comb < bestComb)) {
          bestOpt = &opt;
          bestComb = comb;
          bestWidth = width;
          bestTarget = targetPos;
          bestChoice = choiceIt;
        }
      }
      if (!bestOpt) continue;

      const double gain = firstErr - bestComb;
      if (!best || gain > best->firstErr - best->comb)
        best = Candidate{gp, firstErr, bestComb, bestOpt, bestTarget,
                         bestChoice};
    }
    if (best) {
      Reservation res;
      res.id = ns.nextReservationId++;
      res.satId = best->opt->satId;
      res.earliest = best->opt->tick;
      res.latest = best->opt->tick;
      res.requiredInstrument = parseSignature(best->opt->signature)[0].inst;
      res.gp = best->gp;
      res.firstTick = t;
      res.firstSignature = sig;
      res.firstError = best->firstErr;
      ns.activeReservations.push_back(res);
      // Restrict the target variable's domain to the complementary command.
      OpenChoice kept = *best->choice;
      best->target->domain = {std::move(kept)};
    }
  }

  // Duplicate elimination across all satellites.
  for (auto& v : ns.open) {
    const TimepointVariable& p = proto(ctx, v);
    for (auto& oc : v.domain) {
      const CommandChoice& c = p.domain[oc.protoIdx];
      std::erase_if(oc.covered, [&](GpId gp) {
        if (!ns.observed.count(gp)) return false;
        return matchReservation(ctx, ns, gp, v, c) == nullptr;
      });
    }
    std::erase_if(v.domain,
                  [](const OpenChoice& oc) { return oc.covered.empty(); });
  }
  std::erase_if(ns.open, [](const OpenVar& v) { return v.domain.empty(); });

  return ns;
}

bool isFeasible(const RunContext& ctx, const SearchState& state) {
  const double minCharge = ctx.scenario->energy.minCharge;
  for (const auto& [satId, ss] : state.sats)
    if (ss.charge + 1e-12 < minCharge) return false;
  return true;
}

}  // namespace agiplan
