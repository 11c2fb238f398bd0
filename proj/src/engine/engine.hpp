#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

// Generic constraint-optimization search engine. The engine manages the node
// tree, the beam, and the open-node list; everything the problem means is
// supplied through opaque callbacks. Nothing in this header may depend on the
// planning domain.

namespace agiplan::engine {

// Opaque, immutable domain state attached to each node.
using State = std::shared_ptr<const void>;

struct Node {
  std::shared_ptr<const Node> parent;
  State state;
  double score = 0.0;
  std::uint64_t seq = 0;  // creation order
  int depth = 0;

  // Branching bookkeeping, filled on first selection into the beam.
  int branchVar = -1;
  std::vector<int> valueOrder;  // sorted value handles for branchVar
  std::size_t cursor = 0;       // next valueOrder index to expand
};

using NodePtr = std::shared_ptr<Node>;

struct ChildResult {
  State state;
  double score = 0.0;
};

struct Callbacks {
  // Variable to branch on, or nullopt when the node is complete. Must be a
  // pure function of the state.
  std::function<std::optional<int>(const State&)> chooseVariable;
  // Sorted value handles for the chosen variable (best first).
  std::function<std::vector<int>(const State&, int var)> chooseValue;
  // Applies one value: clones the state, enforces constraints, updates score.
  std::function<ChildResult(const State&, int var, int value)> propagateChoices;
  std::function<bool(const State&)> isFeasible;
};

enum class NodeStrategy { objective, dfs };

struct SearchLimits {
  std::size_t beamWidth = 1;
  std::size_t nodeBudget = 200000;
  std::size_t openCap = 100000;
  // Stop once this many complete feasible nodes exist. 0 means beamWidth;
  // negative means unlimited (run until openNodes empties or budget).
  long long completionTarget = 0;
  // Report the first complete node found instead of the best-scoring one
  // (depth-first semantics: the dive's own solution is the answer).
  bool keepFirstComplete = false;
};

struct SearchResult {
  NodePtr best;            // best complete node, or best seen if none completed
  bool complete = false;   // best has no open variables
  bool truncated = false;  // stopped by node budget
  std::size_t nodesCreated = 0;
  std::size_t completedCount = 0;
};

// Beam selection strategies (chooseNodes). Selected nodes are removed from
// openNodes. objective: highest score first, ties by creation order.
// dfs: depth-first — the beamWidth most recently added nodes, newest first
// (the caller expands them newest-last so the deepest dive continues).
std::vector<NodePtr> chooseNodesObjective(std::vector<NodePtr>& openNodes,
                                          std::size_t beamWidth);
std::vector<NodePtr> chooseNodesDfs(std::vector<NodePtr>& openNodes,
                                    std::size_t beamWidth);

SearchResult planIt(State rootState, const Callbacks& callbacks,
                    NodeStrategy strategy, const SearchLimits& limits);

}  // namespace agiplan::engine
