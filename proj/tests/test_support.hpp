// Shared fixtures, random instance generators and independent oracles for the
// test suites. Nothing in here calls into the algorithms under test.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/graph.hpp"

namespace scml::testing {

// nodes {0,1}; edge (0,1) weight -1
inline SignedGraph g_pathneg() {
  return SignedGraph::from_edges(2, {{0, 1, -1.0}});
}

// nodes {0,1,2}; edges (0,1)+1, (1,2)+1, (0,2)-1
inline SignedGraph g_tri() {
  return SignedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, -1.0}});
}

// nodes {0,1,2,3}; edges (0,1)+2, (2,3)+2, (0,2)-1, (1,3)-1
inline SignedGraph g_twin() {
  return SignedGraph::from_edges(4, {{0, 1, 2.0}, {2, 3, 2.0}, {0, 2, -1.0}, {1, 3, -1.0}});
}

/// Plain edge triple list, independent from the compressed graph layout.
using EdgeTriples = std::vector<std::tuple<NodeId, NodeId, double>>;

inline EdgeTriples triples_of(const SignedGraph &g) {
  EdgeTriples out;
  for (NodeId u = 0; u < g.n(); ++u) {
    const auto row = g.neighbors(u);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (u < row[i]) {
        out.emplace_back(u, row[i], g.incident_weights(u)[i]);
      }
    }
  }
  return out;
}

/// Edge-cut straight from the definition.
inline double oracle_cut(const EdgeTriples &edges, const std::vector<ClusterId> &assignment) {
  double cut = 0;
  for (const auto &[u, v, w] : edges) {
    if (assignment[u] != assignment[v]) {
      cut += w;
    }
  }
  return cut;
}

inline double oracle_cut(const SignedGraph &g, std::span<const ClusterId> assignment) {
  return oracle_cut(triples_of(g), std::vector<ClusterId>(assignment.begin(), assignment.end()));
}

/// Minimum cut over all n^n labelings (every set partition appears at least
/// once). Independent of the restricted-growth enumeration. Use for n <= 7.
inline double oracle_min_cut(const SignedGraph &g) {
  const NodeId n = g.n();
  const EdgeTriples edges = triples_of(g);
  std::vector<ClusterId> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, oracle_cut(edges, label));
    NodeId i = 0;
    while (i < n && ++label[i] == n) {
      label[i] = 0;
      ++i;
    }
    if (i == n) {
      break;
    }
  }
  return n == 0 ? 0.0 : best;
}

/// Number of set partitions of n elements (Bell numbers), for enumeration checks.
inline std::uint64_t bell_number(unsigned n) {
  std::vector<std::vector<std::uint64_t>> tri{{1}};
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> row{tri.back().back()};
    for (const auto x : tri.back()) {
      row.push_back(row.back() + x);
    }
    tri.push_back(row);
  }
  return tri[n][0];
}

/// Erdos-Renyi style graph with +-1 (or integer in [-max_w, max_w] \ {0}) weights.
inline SignedGraph
random_signed_graph(std::mt19937_64 &rng, NodeId n, double edge_prob, int max_weight = 1) {
  std::bernoulli_distribution has_edge(edge_prob);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::bernoulli_distribution negative(0.5);
  std::vector<EdgeRecord> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (has_edge(rng)) {
        const double w = weight(rng);
        edges.push_back({u, v, negative(rng) ? -w : w});
      }
    }
  }
  return SignedGraph::from_edges(n, edges);
}

/// Random assignment with ids drawn from [0, max_clusters).
inline std::vector<ClusterId>
random_assignment(std::mt19937_64 &rng, NodeId n, ClusterId max_clusters) {
  std::uniform_int_distribution<ClusterId> pick(0, std::max<ClusterId>(max_clusters, 1) - 1);
  std::vector<ClusterId> a(n);
  for (auto &c : a) {
    c = pick(rng);
  }
  return a;
}

/// True if a and b describe the same partition (ids may differ).
inline bool same_partition(std::span<const ClusterId> a, std::span<const ClusterId> b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) {
        return false;
      }
    }
  }
  return true;
}

} // namespace scml::testing
