/*******************************************************************************
 * Local search on a single level: label propagation refinement and FM
 * refinement with a gain priority queue, rollback and a stall limit.
 *
 * @file:   refinement.hpp
 ******************************************************************************/
#pragma once

#include <optional>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/local_moves.hpp"

namespace scml {

/// Label propagation started from `c` instead of singletons.
inline Clustering lp_refine(const SignedGraph &g, const Clustering &c, int rounds, Rng &rng) {
  return label_propagation(g, c, rounds, {}, rng);
}

/// Max-priority queue over nodes keyed by their best-move gain. Updates push a
/// new entry and bump the node's version; outdated entries are skipped on pop.
/// Ties are broken in favor of the smaller node id.
class GainQueue {
public:
  explicit GainQueue(NodeId n)
      : version_(n, 0),
        queued_(n, 0),
        marked_(n, 0) {}

  void push(NodeId u, EdgeWeight gain) {
    if (marked_[u]) {
      return;
    }
    ++version_[u];
    queued_[u] = 1;
    heap_.push({gain, u, version_[u]});
  }

  void remove(NodeId u) {
    if (queued_[u]) {
      ++version_[u];
      queued_[u] = 0;
    }
  }

  /// Highest-gain live entry, or nullopt if the queue is empty.
  std::optional<std::pair<NodeId, EdgeWeight>> pop() {
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      if (queued_[top.node] && top.version == version_[top.node] && !marked_[top.node]) {
        queued_[top.node] = 0;
        return std::make_pair(top.node, top.gain);
      }
    }
    return std::nullopt;
  }

  void mark(NodeId u) {
    marked_[u] = 1;
    remove(u);
  }
  [[nodiscard]] bool marked(NodeId u) const {
    return marked_[u] != 0;
  }
  [[nodiscard]] bool contains(NodeId u) const {
    return queued_[u] != 0;
  }

private:
  struct Entry {
    EdgeWeight gain;
    NodeId node;
    std::uint64_t version;

    bool operator<(const Entry &other) const {
      // std::priority_queue pops the largest element
      return std::tie(gain, other.node) < std::tie(other.gain, node);
    }
  };

  std::priority_queue<Entry> heap_;
  std::vector<std::uint64_t> version_;
  std::vector<char> queued_;
  std::vector<char> marked_;
};

struct FmMove {
  NodeId node;
  ClusterId from;
  ClusterId to;
  EdgeWeight cut_after;
};

/// Executed moves of one FM pass and the prefix with minimum cut.
class MoveLog {
public:
  explicit MoveLog(EdgeWeight initial_cut) : initial_cut_(initial_cut), best_cut_(initial_cut) {}

  void record(const FmMove &move) {
    moves_.push_back(move);
    if (move.cut_after < best_cut_) {
      best_cut_ = move.cut_after;
      best_prefix_ = moves_.size();
    }
  }

  [[nodiscard]] std::span<const FmMove> moves() const {
    return moves_;
  }
  [[nodiscard]] std::size_t best_prefix() const {
    return best_prefix_;
  }
  [[nodiscard]] EdgeWeight best_cut() const {
    return best_cut_;
  }
  [[nodiscard]] EdgeWeight initial_cut() const {
    return initial_cut_;
  }

private:
  std::vector<FmMove> moves_;
  EdgeWeight initial_cut_;
  EdgeWeight best_cut_;
  std::size_t best_prefix_ = 0;
};

namespace detail {
struct BestMove {
  ClusterId target = kInvalidCluster;
  EdgeWeight gain = 0;
};

/// Best move among neighboring clusters and a new singleton. Prefers the
/// smallest cluster id on ties, a new singleton only if strictly better.
inline std::optional<BestMove>
best_fm_move(const MoveableClustering &state, NodeId u, ConnectionAccumulator &acc) {
  collect_connections(state, u, {}, acc);
  const ClusterId own = state.cluster(u);
  const EdgeWeight own_connection = acc[own];

  std::optional<BestMove> best;
  for (const ClusterId c : acc.touched()) {
    if (c == own) {
      continue;
    }
    const EdgeWeight g = acc[c] - own_connection;
    if (!best || g > best->gain || (g == best->gain && c < best->target)) {
      best = BestMove{c, g};
    }
  }
  if (state.cluster_size(own) > 1 && (!best || -own_connection > best->gain)) {
    best = BestMove{kNewSingleton, -own_connection};
  }
  acc.clear();
  return best;
}

inline bool is_boundary(const MoveableClustering &state, NodeId u) {
  const ClusterId own = state.cluster(u);
  for (const NodeId v : state.graph().neighbors(u)) {
    if (state.cluster(v) != own) {
      return true;
    }
  }
  return false;
}
} // namespace detail

struct FmStats {
  std::size_t moves = 0;
  std::size_t rolled_back = 0;
  /// Nodes in move order, before rollback.
  std::vector<NodeId> moved_nodes;
};

/// One FM pass: the queue starts with the complete boundary, the max-gain node
/// is moved to its best target and marked, neighbors are (re)queued. Negative
/// moves are allowed; the pass ends when the queue runs empty or after
/// `stall_limit` consecutive moves without positive gain, then rolls back to
/// the best prefix. The result never has a larger cut than the input.
inline Clustering
fm_refine(const SignedGraph &g, const Clustering &c, int stall_limit = 15, FmStats *stats = nullptr) {
  MoveableClustering state(g, c);
  ConnectionAccumulator acc(g.n());
  GainQueue queue(g.n());

  for (NodeId u = 0; u < g.n(); ++u) {
    if (detail::is_boundary(state, u)) {
      if (const auto move = detail::best_fm_move(state, u, acc)) {
        queue.push(u, move->gain);
      }
    }
  }

  MoveLog log(state.cut());
  int stalled = 0;
  while (const auto top = queue.pop()) {
    const NodeId u = top->first;
    const auto move = detail::best_fm_move(state, u, acc);
    queue.mark(u);
    if (!move) {
      continue;
    }
    const ClusterId from = state.cluster(u);
    const ClusterId to = state.move(u, move->target, move->gain);
    log.record({u, from, to, state.cut()});
    SCML_HEAVY_ASSERT(edge_cut(g, state.assignment()) == state.cut(), "FM gain inconsistent");

    for (const NodeId v : g.neighbors(u)) {
      if (queue.marked(v)) {
        continue;
      }
      if (detail::is_boundary(state, v)) {
        if (const auto next = detail::best_fm_move(state, v, acc)) {
          queue.push(v, next->gain);
          continue;
        }
      }
      queue.remove(v);
    }

    stalled = move->gain > 0 ? 0 : stalled + 1;
    if (stalled >= stall_limit) {
      break;
    }
  }

  const auto moves = log.moves();
  for (std::size_t i = moves.size(); i > log.best_prefix(); --i) {
    const FmMove &m = moves[i - 1];
    const EdgeWeight cut_before = i >= 2 ? moves[i - 2].cut_after : log.initial_cut();
    state.move(m.node, m.from, m.cut_after - cut_before);
  }
  if (stats != nullptr) {
    stats->moves = moves.size();
    stats->rolled_back = moves.size() - log.best_prefix();
    stats->moved_nodes.clear();
    for (const FmMove &m : moves) {
      stats->moved_nodes.push_back(m.node);
    }
  }

  // restore the logged value exactly instead of accumulating reverse deltas
  std::vector<ClusterId> assignment(state.assignment().begin(), state.assignment().end());
  Clustering result = Clustering::with_known_cut(std::move(assignment), log.best_cut());
  SCML_HEAVY_ASSERT(result.consistent_with(g), "FM rollback did not reproduce the best cut");
  return result;
}

} // namespace scml
