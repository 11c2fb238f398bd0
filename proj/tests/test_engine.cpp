#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "engine/engine.hpp"

// The engine is domain-free, so these tests drive it with a synthetic
// assignment problem: `vars` variables, each with a fixed list of values, and
// a reward that may depend on the previously picked value (so greedy and
// optimal can disagree).

namespace {

using namespace agiplan::engine;

struct AState {
  int next = 0;
  std::vector<int> picked;
  double score = 0.0;
};

struct Problem {
  // rewards[var][value] with an optional pairwise bonus keyed on the previous
  // value: bonus[var][prevValue][value].
  std::vector<std::vector<double>> rewards;
  std::vector<std::vector<std::vector<double>>> bonus;  // may be empty
  // A value that makes the state infeasible when picked (-1 = none).
  int forbiddenValue = -1;
  bool sortValuesByReward = true;

  int vars() const { return static_cast<int>(rewards.size()); }

  double stepReward(const AState& s, int var, int value) const {
    double r = rewards[var][value];
    if (!bonus.empty() && var > 0) r += bonus[var][s.picked[var - 1]][value];
    return r;
  }
};

const AState& as(const State& s) { return *static_cast<const AState*>(s.get()); }

Callbacks makeCallbacks(const Problem& p) {
  Callbacks cb;
  cb.chooseVariable = [&p](const State& s) -> std::optional<int> {
    if (as(s).next >= p.vars()) return std::nullopt;
    return as(s).next;
  };
  cb.chooseValue = [&p](const State& s, int var) {
    std::vector<int> order(p.rewards[var].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    if (p.sortValuesByReward)
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return p.stepReward(as(s), var, a) > p.stepReward(as(s), var, b);
      });
    return order;
  };
  cb.propagateChoices = [&p](const State& s, int var, int value) {
    auto child = std::make_shared<AState>(as(s));
    child->score += p.stepReward(*child, var, value);
    child->picked.push_back(value);
    child->next = var + 1;
    ChildResult out;
    out.score = child->score;
    out.state = std::move(child);
    return out;
  };
  cb.isFeasible = [&p](const State& s) {
    if (p.forbiddenValue < 0) return true;
    for (int v : as(s).picked)
      if (v == p.forbiddenValue) return false;
    return true;
  };
  return cb;
}

State rootState() { return std::make_shared<AState>(); }

// Independent brute force with the same prefix-feasibility pruning the engine
// applies (infeasible children never get expanded).
void bruteForce(const Problem& p, const Callbacks& cb, const State& s,
                double& best, bool& any) {
  auto var = cb.chooseVariable(s);
  if (!var) {
    any = true;
    best = std::max(best, as(s).score);
    return;
  }
  for (std::size_t v = 0; v < p.rewards[*var].size(); ++v) {
    ChildResult child = cb.propagateChoices(s, *var, static_cast<int>(v));
    if (!cb.isFeasible(child.state)) continue;
    bruteForce(p, cb, child.state, best, any);
  }
}

std::uint64_t splitmix(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit(std::uint64_t& x) {
  return static_cast<double>(splitmix(x) >> 11) / 9007199254740992.0;
}

}  // namespace

TEST_CASE("pure dive creates depth + 1 nodes") {
  Problem p;
  p.rewards = {{10, 0}, {10, 0}, {10, 0}};
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 1;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.best->score == doctest::Approx(30.0));
  CHECK(r.nodesCreated == 4);  // root plus one child per level
  CHECK(r.completedCount == 1);
}

TEST_CASE("unlimited completion target exhausts the tree") {
  Problem p;
  p.rewards = {{1, 2}, {1, 2}, {1, 2}};
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 2;
  limits.completionTarget = -1;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.nodesCreated == 15);    // full binary tree of depth 3
  CHECK(r.completedCount == 8);   // every leaf reached
  CHECK(r.best->score == doctest::Approx(6.0));
}

TEST_CASE("completion target defaults to the beam width") {
  Problem p;
  p.rewards = {{0, 0}, {0, 0}, {0, 0}};
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 3;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.completedCount == 3);
}

TEST_CASE("root with no variables is already complete") {
  Problem p;  // zero variables
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.completedCount == 1);
  CHECK(r.nodesCreated == 1);
  CHECK(r.best->score == 0.0);
}

TEST_CASE("node budget truncates the search") {
  Problem p;
  p.rewards = {{1, 0}, {1, 0}, {1, 0}, {1, 0}};
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 1;
  limits.nodeBudget = 3;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.truncated);
  CHECK(r.nodesCreated == 3);
  CHECK_FALSE(r.complete);
  CHECK(r.best != nullptr);  // best-seen node still reported
}

TEST_CASE("infeasible children are pruned") {
  Problem p;
  p.rewards = {{1, 100}, {1, 100}};
  p.forbiddenValue = 1;  // the high-reward value is infeasible
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 2;
  limits.completionTarget = -1;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.best->score == doctest::Approx(2.0));
  for (int v : as(r.best->state).picked) CHECK(v != 1);
}

TEST_CASE("dfs keeps the first complete dive when asked") {
  Problem p;
  p.rewards = {{1, 100}, {1, 100}, {1, 100}};
  p.sortValuesByReward = false;  // the dive follows input order: value 0 first
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 5;
  limits.completionTarget = 1;
  limits.keepFirstComplete = true;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::dfs, limits);
  CHECK(r.complete);
  CHECK(r.best->score == doctest::Approx(3.0));  // not the 300-point leaf
  CHECK(as(r.best->state).picked == std::vector<int>{0, 0, 0});
}

TEST_CASE("dfs dive depth is independent of beam width") {
  Problem p;
  p.rewards = {{3, 2, 1}, {3, 2, 1}, {3, 2, 1}, {3, 2, 1}};
  Callbacks cb = makeCallbacks(p);
  for (std::size_t b : {1u, 3u, 5u}) {
    SearchLimits limits;
    limits.beamWidth = b;
    limits.completionTarget = 1;
    limits.keepFirstComplete = true;
    SearchResult r = planIt(rootState(), cb, NodeStrategy::dfs, limits);
    CHECK(r.complete);
    // The first dive always follows the best-first value order.
    CHECK(r.best->score == doctest::Approx(12.0));
    CHECK(as(r.best->state).picked == std::vector<int>{0, 0, 0, 0});
  }
}

TEST_CASE("objective selection takes highest scores, oldest on ties") {
  std::vector<NodePtr> open;
  auto mk = [&](double score, std::uint64_t seq) {
    auto n = std::make_shared<Node>();
    n->score = score;
    n->seq = seq;
    open.push_back(n);
    return n;
  };
  auto low = mk(3.0, 0);
  auto tieNew = mk(5.0, 9);
  auto tieOld = mk(5.0, 2);
  std::vector<NodePtr> beam = chooseNodesObjective(open, 2);
  REQUIRE(beam.size() == 2);
  CHECK(beam[0] == tieOld);  // tie resolved toward the older node
  CHECK(beam[1] == tieNew);
  REQUIRE(open.size() == 1);
  CHECK(open[0] == low);
}

TEST_CASE("dfs selection pops the newest nodes first") {
  std::vector<NodePtr> open;
  for (std::uint64_t i = 0; i < 4; ++i) {
    auto n = std::make_shared<Node>();
    n->seq = i;
    open.push_back(n);
  }
  std::vector<NodePtr> beam = chooseNodesDfs(open, 2);
  REQUIRE(beam.size() == 2);
  CHECK(beam[0]->seq == 3);
  CHECK(beam[1]->seq == 2);
  REQUIRE(open.size() == 2);
  CHECK(open.back()->seq == 1);
}

TEST_CASE("open cap does not prevent completion") {
  Problem p;
  p.rewards = {{5, 4, 3}, {5, 4, 3}, {5, 4, 3}};
  Callbacks cb = makeCallbacks(p);
  SearchLimits limits;
  limits.beamWidth = 3;
  limits.openCap = 2;
  SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
  CHECK(r.complete);
  CHECK(r.best->score == doctest::Approx(15.0));
}

TEST_CASE("parent states are never mutated by expansion") {
  Problem p;
  p.rewards = {{1, 2}, {1, 2}};
  Callbacks cb = makeCallbacks(p);
  auto root = std::make_shared<AState>();
  SearchLimits limits;
  limits.completionTarget = -1;
  limits.beamWidth = 2;
  planIt(root, cb, NodeStrategy::objective, limits);
  CHECK(root->picked.empty());
  CHECK(root->score == 0.0);
  CHECK(root->next == 0);
}

TEST_CASE("exhaustive search matches brute force on random instances") {
  std::uint64_t rng = 12345;
  int checked = 0;
  for (int inst = 0; inst < 60; ++inst) {
    Problem p;
    const int vars = 3 + static_cast<int>(splitmix(rng) % 4);   // 3..6
    const int values = 2 + static_cast<int>(splitmix(rng) % 2); // 2..3
    p.rewards.assign(vars, std::vector<double>(values));
    p.bonus.assign(vars, std::vector<std::vector<double>>(
                             values, std::vector<double>(values)));
    for (auto& row : p.rewards)
      for (auto& v : row) v = unit(rng);
    for (auto& layer : p.bonus)
      for (auto& row : layer)
        for (auto& v : row) v = 2.0 * unit(rng);  // bonus can dominate: greedy
                                                  // and optimal often disagree
    Callbacks cb = makeCallbacks(p);

    double optimum = -1.0;
    bool any = false;
    bruteForce(p, cb, rootState(), optimum, any);
    REQUIRE(any);

    SearchLimits exhaustive;
    exhaustive.completionTarget = -1;
    exhaustive.beamWidth = 2;
    exhaustive.nodeBudget = 1u << 20;
    SearchResult full =
        planIt(rootState(), cb, NodeStrategy::objective, exhaustive);
    REQUIRE(full.complete);
    CHECK(full.best->score == optimum);  // exact, same arithmetic path

    for (std::size_t b : {1u, 2u, 3u}) {
      SearchLimits limits;
      limits.beamWidth = b;
      SearchResult r = planIt(rootState(), cb, NodeStrategy::objective, limits);
      CHECK(r.best->score <= optimum + 1e-12);
    }
    ++checked;
  }
  CHECK(checked >= 50);
}
