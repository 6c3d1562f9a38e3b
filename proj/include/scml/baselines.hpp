/*******************************************************************************
 * Greedy additive edge contraction (GAEC), an exact exhaustive solver for tiny
 * graphs and a planted-partition instance generator.
 *
 * @file:   baselines.hpp
 ******************************************************************************/
#pragma once

#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"

namespace scml {

/// Starts from singletons and repeatedly merges the two clusters with the
/// largest summed interaction while it is strictly positive. Ties go to the
/// lexicographically smallest cluster-id pair; a merged cluster keeps the
/// smaller id.
inline Clustering gaec(const SignedGraph &g) {
  const NodeId n = g.n();
  std::vector<std::unordered_map<ClusterId, EdgeWeight>> interaction(n);
  std::vector<ClusterId> parent(n);
  std::vector<char> alive(n, 1);

  struct Candidate {
    EdgeWeight weight;
    ClusterId a;
    ClusterId b;

    bool operator<(const Candidate &other) const {
      // max weight first, then smallest (a, b)
      return std::tie(weight, other.a, other.b) < std::tie(other.weight, a, b);
    }
  };
  std::priority_queue<Candidate> queue;

  for (NodeId u = 0; u < n; ++u) {
    parent[u] = u;
    const auto row = g.neighbors(u);
    const auto row_weights = g.incident_weights(u);
    for (std::size_t i = 0; i < row.size(); ++i) {
      interaction[u][row[i]] = row_weights[i];
      if (u < row[i] && row_weights[i] > 0) {
        queue.push({row_weights[i], u, row[i]});
      }
    }
  }

  auto find = [&](ClusterId c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };

  while (!queue.empty()) {
    const Candidate top = queue.top();
    queue.pop();
    if (!(top.weight > 0)) {
      break;
    }
    if (!alive[top.a] || !alive[top.b]) {
      continue;
    }
    const auto it = interaction[top.a].find(top.b);
    if (it == interaction[top.a].end() || it->second != top.weight) {
      continue;
    }

    const ClusterId keep = top.a;
    const ClusterId gone = top.b;
    interaction[keep].erase(gone);
    interaction[gone].erase(keep);
    for (const auto &[other, w] : interaction[gone]) {
      interaction[other].erase(gone);
      EdgeWeight &merged = interaction[keep][other];
      merged += w;
      interaction[other][keep] = merged;
    }
    for (const auto &[other, w] : interaction[gone]) {
      const EdgeWeight merged = interaction[keep][other];
      if (merged > 0) {
        queue.push({merged, std::min(keep, other), std::max(keep, other)});
      }
    }
    interaction[gone].clear();
    alive[gone] = 0;
    parent[gone] = keep;
  }

  std::vector<ClusterId> assignment(n);
  for (NodeId u = 0; u < n; ++u) {
    assignment[u] = find(u);
  }
  return Clustering(g, std::move(assignment));
}

struct ExactSolution {
  Clustering clustering;
  EdgeWeight cut;
  std::uint64_t partitions_visited;
};

constexpr NodeId kBruteForceMaxNodes = 12;

/// Enumerates every set partition as a restricted growth string and returns a
/// minimum-cut clustering. The cut is updated incrementally as nodes are
/// assigned in order. Refuses graphs with more than 12 nodes.
inline ExactSolution brute_force_optimal(const SignedGraph &g) {
  const NodeId n = g.n();
  if (n > kBruteForceMaxNodes) {
    throw std::length_error(
        "exhaustive search supports at most " + std::to_string(kBruteForceMaxNodes) +
        " nodes, got " + std::to_string(n)
    );
  }
  if (n == 0) {
    return {Clustering(g, {}), 0.0, 1};
  }

  std::vector<ClusterId> current(n, 0);
  std::vector<ClusterId> best(n, 0);
  EdgeWeight best_cut = std::numeric_limits<EdgeWeight>::infinity();
  std::uint64_t visited = 0;

  // contribution of the edges from u to already assigned nodes when u joins block b
  auto partial = [&](NodeId u, ClusterId b) {
    EdgeWeight sum = 0;
    const auto row = g.neighbors(u);
    const auto row_weights = g.incident_weights(u);
    for (std::size_t i = 0; i < row.size() && row[i] < u; ++i) {
      if (current[row[i]] != b) {
        sum += row_weights[i];
      }
    }
    return sum;
  };

  auto recurse = [&](auto &&self, NodeId u, ClusterId blocks_used, EdgeWeight cut) -> void {
    if (u == n) {
      ++visited;
      if (cut < best_cut) {
        best_cut = cut;
        best = current;
      }
      return;
    }
    for (ClusterId b = 0; b <= blocks_used; ++b) {
      current[u] = b;
      self(self, u + 1, std::max(blocks_used, b + 1), cut + partial(u, b));
    }
  };
  current[0] = 0;
  recurse(recurse, 1, 1, 0.0);

  return {Clustering(g, std::move(best)), best_cut, visited};
}

struct PlantedConfig {
  NodeId k = 2;
  NodeId size = 8;
  double p_in = 1.0;
  double p_out = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  SignedGraph graph;
  std::vector<ClusterId> truth;
};

/// k clusters of `size` nodes. Intra-cluster pairs become +1 edges with
/// probability p_in, inter-cluster pairs -1 edges with probability p_out, then
/// each sign flips with probability `noise`.
inline PlantedInstance generate_planted(const PlantedConfig &config) {
  auto valid = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!valid(config.p_in) || !valid(config.p_out) || !valid(config.noise)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  const NodeId n = config.k * config.size;
  std::vector<ClusterId> truth(n);
  for (NodeId u = 0; u < n; ++u) {
    truth[u] = u / config.size;
  }

  Rng rng(config.seed);
  std::bernoulli_distribution intra(config.p_in);
  std::bernoulli_distribution inter(config.p_out);
  std::bernoulli_distribution flip(config.noise);
  std::vector<EdgeRecord> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool same = truth[u] == truth[v];
      if (same ? intra(rng) : inter(rng)) {
        EdgeWeight w = same ? 1.0 : -1.0;
        if (flip(rng)) {
          w = -w;
        }
        edges.push_back({u, v, w});
      }
    }
  }
  if (edges.empty()) {
    throw std::invalid_argument("planted parameters produced an empty edge set");
  }
  return {SignedGraph::from_edges(n, edges), std::move(truth)};
}

} // namespace scml
