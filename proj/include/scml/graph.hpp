/*******************************************************************************
 * Immutable signed graph in compressed adjacency form, normalization of raw
 * edge records and cluster contraction.
 *
 * @file:   graph.hpp
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scml/definitions.hpp"

namespace scml {

/// One raw, not yet normalized input edge. Ids refer to the remapped,
/// contiguous node range.
struct EdgeRecord {
  NodeId u;
  NodeId v;
  EdgeWeight w;

  friend bool operator==(const EdgeRecord &, const EdgeRecord &) = default;
};

/// Undirected signed graph without self or parallel edges. Each edge is stored
/// in both endpoint rows, rows are sorted by neighbor id.
class SignedGraph {
public:
  SignedGraph() : offsets_{0} {}

  SignedGraph(
      std::vector<EdgeIndex> offsets,
      std::vector<NodeId> targets,
      std::vector<EdgeWeight> weights,
      std::vector<NodeWeight> node_weights
  )
      : offsets_(std::move(offsets)),
        targets_(std::move(targets)),
        weights_(std::move(weights)),
        node_weights_(std::move(node_weights)) {
    if (offsets_.empty() || offsets_.size() != node_weights_.size() + 1 ||
        targets_.size() != weights_.size() || offsets_.back() != targets_.size()) {
      throw InvalidInput("inconsistent adjacency arrays");
    }
    compute_statistics();
  }

  /// Builds a graph from canonical undirected edges (u != v, each pair once).
  static SignedGraph from_edges(
      NodeId n,
      const std::vector<EdgeRecord> &edges,
      std::vector<NodeWeight> node_weights = {}
  ) {
    if (node_weights.empty()) {
      node_weights.assign(n, 1.0);
    }
    std::vector<EdgeIndex> offsets(n + 1, 0);
    for (const auto &e : edges) {
      if (e.u >= n || e.v >= n) {
        throw InvalidInput("edge endpoint out of range");
      }
      ++offsets[e.u + 1];
      ++offsets[e.v + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

    std::vector<std::pair<NodeId, EdgeWeight>> adj(offsets.back());
    std::vector<EdgeIndex> fill(offsets.begin(), offsets.end() - 1);
    for (const auto &e : edges) {
      adj[fill[e.u]++] = {e.v, e.w};
      adj[fill[e.v]++] = {e.u, e.w};
    }
    for (NodeId u = 0; u < n; ++u) {
      std::sort(adj.begin() + offsets[u], adj.begin() + offsets[u + 1]);
    }

    std::vector<NodeId> targets(adj.size());
    std::vector<EdgeWeight> weights(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) {
      targets[i] = adj[i].first;
      weights[i] = adj[i].second;
    }
    return {std::move(offsets), std::move(targets), std::move(weights), std::move(node_weights)};
  }

  [[nodiscard]] NodeId n() const {
    return static_cast<NodeId>(offsets_.size() - 1);
  }
  /// Number of undirected edges.
  [[nodiscard]] EdgeIndex m() const {
    return targets_.size() / 2;
  }
  [[nodiscard]] EdgeIndex degree(NodeId u) const {
    return offsets_[u + 1] - offsets_[u];
  }
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  [[nodiscard]] std::span<const EdgeWeight> incident_weights(NodeId u) const {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  [[nodiscard]] NodeWeight node_weight(NodeId u) const {
    return node_weights_[u];
  }
  [[nodiscard]] std::span<const NodeWeight> node_weights() const {
    return node_weights_;
  }
  [[nodiscard]] NodeWeight total_node_weight() const {
    return std::accumulate(node_weights_.begin(), node_weights_.end(), 0.0);
  }

  [[nodiscard]] EdgeIndex m_plus() const {
    return m_plus_;
  }
  [[nodiscard]] EdgeIndex m_minus() const {
    return m_minus_;
  }
  /// Sum of all negative edge weights, the lower bound for every edge-cut.
  [[nodiscard]] EdgeWeight sum_neg() const {
    return sum_neg_;
  }
  /// Sum of all edge weights, the edge-cut of the singleton clustering.
  [[nodiscard]] EdgeWeight total_edge_weight() const {
    return total_weight_;
  }

  /// Calls f(u, v, w) once per undirected edge with u < v.
  template <typename Lambda> void for_each_edge(Lambda &&f) const {
    for (NodeId u = 0; u < n(); ++u) {
      for (EdgeIndex e = offsets_[u]; e < offsets_[u + 1]; ++e) {
        if (u < targets_[e]) {
          f(u, targets_[e], weights_[e]);
        }
      }
    }
  }

  [[nodiscard]] std::vector<EdgeRecord> edges() const {
    std::vector<EdgeRecord> result;
    result.reserve(m());
    for_each_edge([&](NodeId u, NodeId v, EdgeWeight w) { result.push_back({u, v, w}); });
    return result;
  }

  [[nodiscard]] std::optional<EdgeWeight> edge_weight(NodeId u, NodeId v) const {
    const auto row = neighbors(u);
    const auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) {
      return std::nullopt;
    }
    return weights_[offsets_[u] + static_cast<EdgeIndex>(it - row.begin())];
  }

  /// Checks every structural invariant, returns a description of the first
  /// violation or std::nullopt.
  [[nodiscard]] std::optional<std::string> find_violation() const {
    EdgeIndex plus = 0;
    EdgeIndex minus = 0;
    for (NodeId u = 0; u < n(); ++u) {
      if (!(node_weights_[u] > 0)) {
        return "non-positive node weight at " + std::to_string(u);
      }
      const auto row = neighbors(u);
      for (std::size_t i = 0; i < row.size(); ++i) {
        const NodeId v = row[i];
        const EdgeWeight w = incident_weights(u)[i];
        if (v >= n()) {
          return "neighbor out of range at " + std::to_string(u);
        }
        if (v == u) {
          return "self edge at " + std::to_string(u);
        }
        if (i > 0 && row[i - 1] >= v) {
          return "unsorted or parallel edge at " + std::to_string(u);
        }
        if (w == 0.0) {
          return "zero weight edge at " + std::to_string(u);
        }
        if (edge_weight(v, u) != w) {
          return "asymmetric edge " + std::to_string(u) + "-" + std::to_string(v);
        }
        if (u < v) {
          (w > 0 ? plus : minus) += 1;
        }
      }
    }
    if (plus != m_plus_ || minus != m_minus_ || plus + minus != m()) {
      return "edge sign counts inconsistent";
    }
    return std::nullopt;
  }

private:
  void compute_statistics() {
    m_plus_ = 0;
    m_minus_ = 0;
    sum_neg_ = 0;
    total_weight_ = 0;
    for_each_edge([&](NodeId, NodeId, EdgeWeight w) {
      total_weight_ += w;
      if (w > 0) {
        ++m_plus_;
      } else {
        ++m_minus_;
        sum_neg_ += w;
      }
    });
  }

  std::vector<EdgeIndex> offsets_;
  std::vector<NodeId> targets_;
  std::vector<EdgeWeight> weights_;
  std::vector<NodeWeight> node_weights_;

  EdgeIndex m_plus_ = 0;
  EdgeIndex m_minus_ = 0;
  EdgeWeight sum_neg_ = 0;
  EdgeWeight total_weight_ = 0;
};

struct NormalizeOptions {
  /// Keep summed real weights instead of quantizing them to +1 / -1.
  bool raw_weights = false;
};

/// Drops self edges, merges parallel and opposite records by summation and
/// maps each merged weight to its sign (unless raw weights are requested).
/// Pairs summing to exactly zero produce no edge.
inline SignedGraph
normalize(std::vector<EdgeRecord> records, NodeId n, NormalizeOptions options = {}) {
  std::erase_if(records, [](const EdgeRecord &e) { return e.u == e.v; });
  for (auto &e : records) {
    if (e.u > e.v) {
      std::swap(e.u, e.v);
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const auto &a, const auto &b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });

  std::vector<EdgeRecord> merged;
  merged.reserve(records.size());
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    EdgeWeight sum = 0;
    while (j < records.size() && records[j].u == records[i].u && records[j].v == records[i].v) {
      sum += records[j].w;
      ++j;
    }
    if (sum != 0.0) {
      merged.push_back({records[i].u, records[i].v, options.raw_weights ? sum : (sum > 0 ? 1.0 : -1.0)});
    }
    i = j;
  }
  return SignedGraph::from_edges(n, merged);
}

/// Result of contracting every cluster of a clustering into one node.
struct Contraction {
  SignedGraph coarse;
  /// Fine node -> coarse node.
  std::vector<NodeId> map;
};

/// Relabels arbitrary cluster ids to 0..k-1 in order of first appearance.
/// Returns the number of distinct ids.
inline ClusterId compact_cluster_ids(std::span<ClusterId> assignment) {
  const ClusterId max_id =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end());
  ClusterId next = 0;
  if (static_cast<std::size_t>(max_id) < 4 * assignment.size() + 16) {
    std::vector<ClusterId> relabel(static_cast<std::size_t>(max_id) + 1, kInvalidCluster);
    for (auto &c : assignment) {
      if (relabel[c] == kInvalidCluster) {
        relabel[c] = next++;
      }
      c = relabel[c];
    }
  } else {
    std::unordered_map<ClusterId, ClusterId> relabel;
    for (auto &c : assignment) {
      auto [it, inserted] = relabel.try_emplace(c, next);
      next += inserted ? 1 : 0;
      c = it->second;
    }
  }
  return next;
}

/// Contracts each cluster to a single node. Coarse node weights are sums of
/// member weights, coarse edge weights are sums of all fine edges between the
/// two clusters. Intra-cluster edges and zero-sum coarse edges vanish.
inline Contraction contract(const SignedGraph &g, std::span<const ClusterId> assignment) {
  if (assignment.size() != g.n()) {
    throw InvalidInput("clustering size does not match graph");
  }
  std::vector<NodeId> map(assignment.begin(), assignment.end());
  const NodeId coarse_n = compact_cluster_ids(map);

  // bucket members by coarse node
  std::vector<NodeId> bucket_start(coarse_n + 1, 0);
  for (const NodeId c : map) {
    ++bucket_start[c + 1];
  }
  std::partial_sum(bucket_start.begin(), bucket_start.end(), bucket_start.begin());
  std::vector<NodeId> members(g.n());
  {
    std::vector<NodeId> fill(bucket_start.begin(), bucket_start.end() - 1);
    for (NodeId u = 0; u < g.n(); ++u) {
      members[fill[map[u]]++] = u;
    }
  }

  std::vector<NodeWeight> coarse_weights(coarse_n, 0.0);
  std::vector<EdgeRecord> coarse_edges;
  coarse_edges.reserve(g.m());

  std::vector<EdgeWeight> accumulator(coarse_n, 0.0);
  std::vector<char> touched_flag(coarse_n, 0);
  std::vector<NodeId> touched;

  // Each coarse pair is summed once from its smaller endpoint, so both
  // directions receive the bit-identical weight.
  for (NodeId c = 0; c < coarse_n; ++c) {
    for (NodeId i = bucket_start[c]; i < bucket_start[c + 1]; ++i) {
      const NodeId u = members[i];
      coarse_weights[c] += g.node_weight(u);
      const auto row = g.neighbors(u);
      const auto row_weights = g.incident_weights(u);
      for (std::size_t j = 0; j < row.size(); ++j) {
        const NodeId d = map[row[j]];
        if (d <= c) {
          continue;
        }
        if (!touched_flag[d]) {
          touched_flag[d] = 1;
          touched.push_back(d);
        }
        accumulator[d] += row_weights[j];
      }
    }
    for (const NodeId d : touched) {
      if (accumulator[d] != 0.0) {
        coarse_edges.push_back({c, d, accumulator[d]});
      }
      accumulator[d] = 0.0;
      touched_flag[d] = 0;
    }
    touched.clear();
  }

  return {SignedGraph::from_edges(coarse_n, coarse_edges, std::move(coarse_weights)), std::move(map)};
}

} // namespace scml
