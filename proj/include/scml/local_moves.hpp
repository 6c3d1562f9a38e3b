/*******************************************************************************
 * Mutable clustering state for local search, connection-weight accumulator
 * and the label propagation move rule shared by coarsening and refinement.
 *
 * @file:   local_moves.hpp
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"

namespace scml {

/// Target id meaning "open a new singleton cluster".
constexpr ClusterId kNewSingleton = kInvalidCluster - 1;

/// Clustering under local search. Cluster ids stay within [0, n) so that a
/// free id exists whenever a node that is not alone wants its own cluster.
class MoveableClustering {
public:
  MoveableClustering(const SignedGraph &g, const Clustering &initial)
      : graph_(&g),
        assignment_(initial.assignment().begin(), initial.assignment().end()),
        sizes_(g.n(), 0),
        cut_(initial.cut()) {
    if (assignment_.size() != g.n()) {
      throw InvalidInput("clustering size does not match graph");
    }
    if (!assignment_.empty() &&
        *std::max_element(assignment_.begin(), assignment_.end()) >= g.n()) {
      compact_cluster_ids(assignment_);
    }
    for (const ClusterId c : assignment_) {
      ++sizes_[c];
    }
    for (ClusterId c = g.n(); c-- > 0;) {
      if (sizes_[c] == 0) {
        free_ids_.push_back(c);
      }
    }
  }

  [[nodiscard]] const SignedGraph &graph() const {
    return *graph_;
  }
  [[nodiscard]] ClusterId cluster(NodeId u) const {
    return assignment_[u];
  }
  [[nodiscard]] NodeId cluster_size(ClusterId c) const {
    return sizes_[c];
  }
  [[nodiscard]] EdgeWeight cut() const {
    return cut_;
  }
  [[nodiscard]] std::span<const ClusterId> assignment() const {
    return assignment_;
  }

  /// Returns an id with no members. Stale entries of the free list (ids that
  /// were refilled after being pushed) are dropped on the way.
  ClusterId fresh_cluster() {
    while (!free_ids_.empty()) {
      const ClusterId c = free_ids_.back();
      free_ids_.pop_back();
      if (sizes_[c] == 0) {
        return c;
      }
    }
    throw std::logic_error("no free cluster id available");
  }

  /// Moves u to `to` (or a new singleton) and lowers the cut by `gain`.
  /// Returns the cluster u ended up in.
  ClusterId move(NodeId u, ClusterId to, EdgeWeight gain) {
    if (to == kNewSingleton) {
      to = fresh_cluster();
    }
    const ClusterId from = assignment_[u];
    if (--sizes_[from] == 0) {
      free_ids_.push_back(from);
    }
    ++sizes_[to];
    assignment_[u] = to;
    cut_ -= gain;
    return to;
  }

  [[nodiscard]] Clustering snapshot() const {
    return Clustering::with_known_cut(assignment_, cut_);
  }

  Clustering release() && {
    return Clustering::with_known_cut(std::move(assignment_), cut_);
  }

private:
  const SignedGraph *graph_;
  std::vector<ClusterId> assignment_;
  std::vector<NodeId> sizes_;
  std::vector<ClusterId> free_ids_;
  EdgeWeight cut_;
};

/// Sparse per-cluster weight accumulator, reset in O(#touched).
class ConnectionAccumulator {
public:
  explicit ConnectionAccumulator(std::size_t capacity)
      : weights_(capacity, 0.0),
        flags_(capacity, 0) {}

  void add(ClusterId c, EdgeWeight w) {
    if (!flags_[c]) {
      flags_[c] = 1;
      touched_.push_back(c);
    }
    weights_[c] += w;
  }

  [[nodiscard]] EdgeWeight operator[](ClusterId c) const {
    return weights_[c];
  }
  [[nodiscard]] std::span<const ClusterId> touched() const {
    return touched_;
  }

  void clear() {
    for (const ClusterId c : touched_) {
      weights_[c] = 0.0;
      flags_[c] = 0;
    }
    touched_.clear();
  }

private:
  std::vector<EdgeWeight> weights_;
  std::vector<char> flags_;
  std::vector<ClusterId> touched_;
};

/// Accumulates u's connection weight to every neighboring cluster. Neighbors
/// outside u's block are ignored when blocks are given.
inline void collect_connections(
    const MoveableClustering &state,
    NodeId u,
    std::span<const ClusterId> blocks,
    ConnectionAccumulator &acc
) {
  const SignedGraph &g = state.graph();
  const auto row = g.neighbors(u);
  const auto row_weights = g.incident_weights(u);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const NodeId v = row[i];
    if (!blocks.empty() && blocks[v] != blocks[u]) {
      continue;
    }
    acc.add(state.cluster(v), row_weights[i]);
  }
}

/// Decrease in edge-cut when moving v from its cluster to `target`
/// (kNewSingleton for a fresh cluster). Moving to the own cluster has gain 0.
inline EdgeWeight gain(const SignedGraph &g, const Clustering &c, NodeId v, ClusterId target) {
  const ClusterId own = c[v];
  if (target == own) {
    return 0.0;
  }
  EdgeWeight to_own = 0;
  EdgeWeight to_target = 0;
  const auto row = g.neighbors(v);
  const auto row_weights = g.incident_weights(v);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const ClusterId cv = c[row[i]];
    if (cv == own) {
      to_own += row_weights[i];
    } else if (cv == target) {
      to_target += row_weights[i];
    }
  }
  return to_target - to_own;
}

/// Round-based greedy label propagation starting from `initial`.
///
/// Each round visits all nodes in a fresh random order. A node joins the
/// cluster with maximum connection weight among its own cluster and the
/// neighboring clusters of its block, ties broken uniformly at random. If even
/// the best connection is negative the node becomes a singleton. Every move has
/// non-negative gain, so the edge-cut never increases. Stops after `rounds`
/// rounds or after a round without moves.
inline Clustering label_propagation(
    const SignedGraph &g,
    const Clustering &initial,
    int rounds,
    std::span<const ClusterId> blocks,
    Rng &rng
) {
  MoveableClustering state(g, initial);
  ConnectionAccumulator acc(g.n());
  std::vector<NodeId> order(g.n());
  std::iota(order.begin(), order.end(), 0);
  std::vector<ClusterId> ties;

  for (int round = 0; round < rounds; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t moves = 0;

    for (const NodeId u : order) {
      if (g.degree(u) == 0) {
        continue;
      }
      collect_connections(state, u, blocks, acc);
      const ClusterId own = state.cluster(u);
      const EdgeWeight own_connection = acc[own];

      EdgeWeight best = own_connection;
      ties.assign(1, own);
      for (const ClusterId c : acc.touched()) {
        if (c == own) {
          continue;
        }
        if (acc[c] > best) {
          best = acc[c];
          ties.assign(1, c);
        } else if (acc[c] == best) {
          ties.push_back(c);
        }
      }
      acc.clear();

      if (best < 0) {
        // every candidate repels u; own_connection < 0 implies u is not alone
        [[maybe_unused]] const EdgeWeight before = state.cut();
        state.move(u, kNewSingleton, -own_connection);
        SCML_HEAVY_ASSERT(state.cut() <= before, "label propagation increased the cut");
        ++moves;
        continue;
      }

      const ClusterId target = ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
      if (target != own) {
        [[maybe_unused]] const EdgeWeight before = state.cut();
        state.move(u, target, best - own_connection);
        SCML_HEAVY_ASSERT(state.cut() <= before, "label propagation increased the cut");
        ++moves;
      }
    }

    SCML_HEAVY_ASSERT(
        edge_cut(g, state.assignment()) == state.cut(), "incremental cut diverged during LP"
    );
    if (moves == 0) {
      break;
    }
  }
  return std::move(state).release();
}

} // namespace scml
