/*******************************************************************************
 * Clustering representation, edge-cut / z_value metrics, cut-edge sets and
 * projection of clusterings between hierarchy levels.
 *
 * @file:   clustering.hpp
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scml/definitions.hpp"
#include "scml/graph.hpp"

namespace scml {

/// Sum of the weights of all edges whose endpoints lie in different clusters.
inline EdgeWeight edge_cut(const SignedGraph &g, std::span<const ClusterId> assignment) {
  EdgeWeight cut = 0;
  g.for_each_edge([&](NodeId u, NodeId v, EdgeWeight w) {
    if (assignment[u] != assignment[v]) {
      cut += w;
    }
  });
  return cut;
}

/// Assignment of every node to a cluster id together with its edge-cut.
/// Cluster ids are arbitrary; use canonical() for ids 0..k-1.
class Clustering {
public:
  Clustering() = default;

  Clustering(const SignedGraph &g, std::vector<ClusterId> assignment)
      : assignment_(std::move(assignment)) {
    if (assignment_.size() != g.n()) {
      throw InvalidInput("clustering size does not match graph");
    }
    cut_ = edge_cut(g, assignment_);
  }

  /// For callers that maintain the cut incrementally.
  static Clustering with_known_cut(std::vector<ClusterId> assignment, EdgeWeight cut) {
    Clustering c;
    c.assignment_ = std::move(assignment);
    c.cut_ = cut;
    return c;
  }

  static Clustering singletons(const SignedGraph &g) {
    std::vector<ClusterId> a(g.n());
    for (NodeId u = 0; u < g.n(); ++u) {
      a[u] = u;
    }
    return with_known_cut(std::move(a), g.total_edge_weight());
  }

  static Clustering all_in_one(const SignedGraph &g) {
    return with_known_cut(std::vector<ClusterId>(g.n(), 0), 0.0);
  }

  [[nodiscard]] NodeId size() const {
    return static_cast<NodeId>(assignment_.size());
  }
  [[nodiscard]] ClusterId operator[](NodeId u) const {
    return assignment_[u];
  }
  [[nodiscard]] std::span<const ClusterId> assignment() const {
    return assignment_;
  }
  [[nodiscard]] EdgeWeight cut() const {
    return cut_;
  }

  /// Number of non-empty clusters, computed on demand.
  [[nodiscard]] NodeId num_clusters() const {
    std::vector<ClusterId> copy = assignment_;
    return compact_cluster_ids(copy);
  }

  /// Same partition with ids 0..k-1 in order of first appearance.
  [[nodiscard]] Clustering canonical() const {
    Clustering c = *this;
    compact_cluster_ids(c.assignment_);
    return c;
  }

  [[nodiscard]] bool is_singletons() const {
    std::vector<ClusterId> copy = assignment_;
    return compact_cluster_ids(copy) == assignment_.size();
  }

  [[nodiscard]] bool consistent_with(const SignedGraph &g) const {
    return assignment_.size() == g.n() && edge_cut(g, assignment_) == cut_;
  }

private:
  std::vector<ClusterId> assignment_;
  EdgeWeight cut_ = 0;
};

inline EdgeWeight edge_cut(const SignedGraph &g, const Clustering &c) {
  return edge_cut(g, c.assignment());
}

class UndefinedMetric : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// 1 - cut / sum_neg. Zero exactly when the cut meets the lower bound.
inline double z_value(const SignedGraph &g, EdgeWeight cut) {
  if (g.sum_neg() == 0.0) {
    throw UndefinedMetric("z_value is undefined for graphs without negative edges");
  }
  return 1.0 - cut / g.sum_neg();
}

/// Sorted set of cut edges, each stored as (min endpoint, max endpoint).
class CutEdgeSet {
public:
  using Edge = std::pair<NodeId, NodeId>;

  CutEdgeSet() = default;
  explicit CutEdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    for (auto &[u, v] : edges_) {
      if (u > v) {
        std::swap(u, v);
      }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  [[nodiscard]] std::size_t size() const {
    return edges_.size();
  }
  [[nodiscard]] bool empty() const {
    return edges_.empty();
  }
  [[nodiscard]] std::span<const Edge> edges() const {
    return edges_;
  }
  [[nodiscard]] bool contains(NodeId u, NodeId v) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{std::min(u, v), std::max(u, v)});
  }

  friend bool operator==(const CutEdgeSet &, const CutEdgeSet &) = default;

private:
  friend CutEdgeSet cut_edges(const SignedGraph &, std::span<const ClusterId>);
  std::vector<Edge> edges_;
};

inline CutEdgeSet cut_edges(const SignedGraph &g, std::span<const ClusterId> assignment) {
  CutEdgeSet set;
  g.for_each_edge([&](NodeId u, NodeId v, EdgeWeight) {
    if (assignment[u] != assignment[v]) {
      set.edges_.emplace_back(u, v);
    }
  });
  // for_each_edge visits (u, v) with u < v in lexicographic order already
  return set;
}

inline CutEdgeSet cut_edges(const SignedGraph &g, const Clustering &c) {
  return cut_edges(g, c.assignment());
}

/// |a xor b| via a linear merge of the sorted edge lists.
inline std::size_t symmetric_difference(const CutEdgeSet &a, const CutEdgeSet &b) {
  const auto lhs = a.edges();
  const auto rhs = b.edges();
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t common = 0;
  while (i < lhs.size() && j < rhs.size()) {
    if (lhs[i] < rhs[j]) {
      ++i;
    } else if (rhs[j] < lhs[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return lhs.size() + rhs.size() - 2 * common;
}

/// Lifts a clustering of a coarse graph to the finer graph it was contracted
/// from. The edge-cut carries over unchanged.
inline Clustering project_to_finer(
    const SignedGraph &fine, const Clustering &coarse, std::span<const NodeId> map
) {
  if (map.size() != fine.n()) {
    throw std::logic_error("projection map does not cover the finer graph");
  }
  std::vector<ClusterId> assignment(fine.n());
  for (NodeId u = 0; u < fine.n(); ++u) {
    if (map[u] >= coarse.size()) {
      throw std::logic_error("projection map points outside the coarse clustering");
    }
    assignment[u] = coarse[map[u]];
  }
  Clustering result = Clustering::with_known_cut(std::move(assignment), coarse.cut());
  SCML_HEAVY_ASSERT(result.consistent_with(fine), "projection changed the edge-cut");
  return result;
}

/// Image of a fine assignment on the coarse graph. Only meaningful when every
/// coarse node's members share one cluster id in `fine`.
inline std::vector<ClusterId> project_to_coarser(
    std::span<const ClusterId> fine, std::span<const NodeId> map, NodeId coarse_n
) {
  std::vector<ClusterId> coarse(coarse_n, kInvalidCluster);
  for (std::size_t u = 0; u < map.size(); ++u) {
    coarse[map[u]] = fine[u];
  }
  return coarse;
}

/// Contraction by a clustering value.
inline Contraction contract(const SignedGraph &g, const Clustering &c) {
  return contract(g, c.assignment());
}

} // namespace scml
