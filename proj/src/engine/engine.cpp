#include "engine/engine.hpp"

#include <algorithm>
#include <limits>

namespace agiplan::engine {

std::vector<NodePtr> chooseNodesObjective(std::vector<NodePtr>& openNodes,
                                          std::size_t beamWidth) {
  const std::size_t k = std::min(beamWidth, openNodes.size());
  std::vector<std::size_t> order(openNodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (openNodes[a]->score != openNodes[b]->score)
      return openNodes[a]->score > openNodes[b]->score;
    return openNodes[a]->seq < openNodes[b]->seq;
  });

  std::vector<NodePtr> beam;
  beam.reserve(k);
  std::vector<bool> taken(openNodes.size(), false);
  for (std::size_t i = 0; i < k; ++i) {
    beam.push_back(openNodes[order[i]]);
    taken[order[i]] = true;
  }
  std::vector<NodePtr> rest;
  rest.reserve(openNodes.size() - k);
  for (std::size_t i = 0; i < openNodes.size(); ++i)
    if (!taken[i]) rest.push_back(openNodes[i]);
  openNodes.swap(rest);
  return beam;
}

std::vector<NodePtr> chooseNodesDfs(std::vector<NodePtr>& openNodes,
                                    std::size_t beamWidth) {
  const std::size_t k = std::min(beamWidth, openNodes.size());
  std::vector<NodePtr> beam;
  beam.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    beam.push_back(openNodes.back());
    openNodes.pop_back();
  }
  return beam;
}

namespace {

void enforceOpenCap(std::vector<NodePtr>& openNodes, std::size_t cap) {
  if (openNodes.size() <= cap) return;
  const std::size_t evict = openNodes.size() - cap;
  std::vector<std::size_t> order(openNodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Evict lowest scores; among equals, the newest.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (openNodes[a]->score != openNodes[b]->score)
      return openNodes[a]->score < openNodes[b]->score;
    return openNodes[a]->seq > openNodes[b]->seq;
  });
  std::vector<bool> dropped(openNodes.size(), false);
  for (std::size_t i = 0; i < evict; ++i) dropped[order[i]] = true;
  std::vector<NodePtr> rest;
  rest.reserve(cap);
  for (std::size_t i = 0; i < openNodes.size(); ++i)
    if (!dropped[i]) rest.push_back(openNodes[i]);
  openNodes.swap(rest);
}

}  // namespace

SearchResult planIt(State rootState, const Callbacks& callbacks,
                    NodeStrategy strategy, const SearchLimits& limits) {
  SearchResult result;
  std::uint64_t nextSeq = 0;

  auto root = std::make_shared<Node>();
  root->state = std::move(rootState);
  root->seq = nextSeq++;
  result.nodesCreated = 1;

  NodePtr bestComplete;
  NodePtr bestAny = root;

  const std::size_t target =
      limits.completionTarget == 0
          ? std::max<std::size_t>(1, limits.beamWidth)
          : (limits.completionTarget < 0
                 ? std::numeric_limits<std::size_t>::max()
                 : static_cast<std::size_t>(limits.completionTarget));

  std::vector<NodePtr> openNodes;
  if (callbacks.chooseVariable(root->state)) {
    openNodes.push_back(root);
  } else {
    bestComplete = root;
    ++result.completedCount;
  }

  bool stop = result.completedCount >= target;
  while (!stop && !openNodes.empty()) {
    std::vector<NodePtr> beam = strategy == NodeStrategy::objective
                                    ? chooseNodesObjective(openNodes,
                                                           limits.beamWidth)
                                    : chooseNodesDfs(openNodes, limits.beamWidth);
    // Expand the newest node last so its children land on top of the stack
    // and the depth-first dive stays coherent across beam widths.
    if (strategy == NodeStrategy::dfs) std::reverse(beam.begin(), beam.end());
    for (const NodePtr& node : beam) {
      if (node->branchVar < 0) {
        auto var = callbacks.chooseVariable(node->state);
        if (!var) continue;  // defensive; complete nodes are never inserted
        node->branchVar = *var;
        node->valueOrder = callbacks.chooseValue(node->state, *var);
      }
      if (node->cursor >= node->valueOrder.size()) continue;
      const int value = node->valueOrder[node->cursor++];
      // Re-insert the parent before the child so DFS expands the child next.
      if (node->cursor < node->valueOrder.size()) openNodes.push_back(node);

      ChildResult expanded =
          callbacks.propagateChoices(node->state, node->branchVar, value);
      auto child = std::make_shared<Node>();
      child->parent = node;
      child->state = std::move(expanded.state);
      child->score = expanded.score;
      child->seq = nextSeq++;
      child->depth = node->depth + 1;
      ++result.nodesCreated;

      if (callbacks.isFeasible(child->state)) {
        if (child->score > bestAny->score) bestAny = child;
        if (callbacks.chooseVariable(child->state)) {
          openNodes.push_back(child);
        } else {
          ++result.completedCount;
          if (!bestComplete ||
              (!limits.keepFirstComplete && child->score > bestComplete->score))
            bestComplete = child;
          if (result.completedCount >= target) {
            stop = true;
            break;
          }
        }
      }
      if (result.nodesCreated >= limits.nodeBudget) {
        result.truncated = true;
        stop = true;
        break;
      }
    }
    enforceOpenCap(openNodes, limits.openCap);
  }

  if (bestComplete) {
    result.best = bestComplete;
    result.complete = true;
  } else {
    result.best = bestAny;
  }
  return result;
}

}  // namespace agiplan::engine
