/*******************************************************************************
 * Label propagation clustering for contraction (optionally restricted to the
 * blocks of one or two reference clusterings) and the contraction hierarchy.
 *
 * @file:   coarsening.hpp
 ******************************************************************************/
#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/local_moves.hpp"

namespace scml {

enum class ConstraintMode { none, subset_of_one, subset_of_two };

/// Partition of the nodes into blocks; clusters computed under the constraint
/// never contain nodes of two different blocks.
class Constraint {
public:
  static Constraint none() {
    return {};
  }

  /// Blocks are the clusters of `reference`.
  static Constraint subset_of(const SignedGraph &g, const Clustering &reference) {
    if (reference.size() != g.n()) {
      throw InvalidInput("reference clustering size does not match graph");
    }
    Constraint c;
    c.mode_ = ConstraintMode::subset_of_one;
    c.blocks_.assign(reference.assignment().begin(), reference.assignment().end());
    compact_cluster_ids(c.blocks_);
    return c;
  }

  /// Blocks are the connected components of g after removing every cut edge
  /// of `a` and of `b`.
  static Constraint
  subset_of_both(const SignedGraph &g, const Clustering &a, const Clustering &b) {
    if (a.size() != g.n() || b.size() != g.n()) {
      throw InvalidInput("reference clustering size does not match graph");
    }
    Constraint c;
    c.mode_ = ConstraintMode::subset_of_two;
    c.blocks_.assign(g.n(), kInvalidCluster);
    std::vector<NodeId> stack;
    ClusterId next = 0;
    for (NodeId root = 0; root < g.n(); ++root) {
      if (c.blocks_[root] != kInvalidCluster) {
        continue;
      }
      c.blocks_[root] = next;
      stack.push_back(root);
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const NodeId v : g.neighbors(u)) {
          if (c.blocks_[v] == kInvalidCluster && a[u] == a[v] && b[u] == b[v]) {
            c.blocks_[v] = next;
            stack.push_back(v);
          }
        }
      }
      ++next;
    }
    return c;
  }

  [[nodiscard]] ConstraintMode mode() const {
    return mode_;
  }
  [[nodiscard]] bool active() const {
    return mode_ != ConstraintMode::none;
  }
  /// Block id per node; empty when inactive.
  [[nodiscard]] std::span<const ClusterId> blocks() const {
    return blocks_;
  }

  /// Carries the blocks over to the graph contracted by `map`. Every coarse
  /// node must consist of nodes of a single block.
  [[nodiscard]] Constraint coarsened(std::span<const NodeId> map, NodeId coarse_n) const {
    if (!active()) {
      return {};
    }
    Constraint c;
    c.mode_ = mode_;
    c.blocks_ = project_to_coarser(blocks_, map, coarse_n);
    return c;
  }

private:
  ConstraintMode mode_ = ConstraintMode::none;
  std::vector<ClusterId> blocks_;
};

/// Label propagation from the singleton clustering, restricted to the
/// constraint's blocks.
inline Clustering label_propagation_cluster(
    const SignedGraph &g, int rounds, const Constraint &constraint, Rng &rng
) {
  if (rounds < 1) {
    throw std::invalid_argument("label propagation needs at least one round");
  }
  return label_propagation(g, Clustering::singletons(g), rounds, constraint.blocks(), rng);
}

/// Stack of successively contracted graphs. Level 0 is the input graph, which
/// is referenced and must outlive the hierarchy.
class Hierarchy {
public:
  explicit Hierarchy(const SignedGraph &finest) : finest_(&finest) {}
  explicit Hierarchy(SignedGraph &&) = delete;

  [[nodiscard]] std::size_t num_levels() const {
    return levels_.size() + 1;
  }
  [[nodiscard]] const SignedGraph &graph(std::size_t level) const {
    return level == 0 ? *finest_ : levels_[level - 1].coarse;
  }
  [[nodiscard]] const SignedGraph &coarsest() const {
    return graph(num_levels() - 1);
  }
  /// Node of `level` -> node of `level + 1`.
  [[nodiscard]] std::span<const NodeId> map_to_coarser(std::size_t level) const {
    return levels_[level].map;
  }

  void push(Contraction contraction) {
    levels_.push_back(std::move(contraction));
  }

  /// Image of a level-0 assignment on the coarsest graph.
  [[nodiscard]] std::vector<ClusterId> image_on_coarsest(std::span<const ClusterId> fine) const {
    std::vector<ClusterId> current(fine.begin(), fine.end());
    for (std::size_t level = 0; level + 1 < num_levels(); ++level) {
      current = project_to_coarser(current, map_to_coarser(level), graph(level + 1).n());
    }
    return current;
  }

private:
  const SignedGraph *finest_;
  std::vector<Contraction> levels_;
};

struct CoarseningConfig {
  int lp_rounds = 10;
  /// Apply the constraint only while clustering level 0.
  bool first_level_only = false;
};

/// Clusters and contracts until label propagation finds no merge. Under a
/// constraint every edge between different blocks survives to the coarsest
/// graph.
inline Hierarchy build_hierarchy(
    const SignedGraph &g, const Constraint &constraint, const CoarseningConfig &config, Rng &rng
) {
  Hierarchy hierarchy(g);
  Constraint current = constraint;
  while (true) {
    const SignedGraph &level_graph = hierarchy.coarsest();
    Clustering clustering = label_propagation_cluster(level_graph, config.lp_rounds, current, rng);
    if (clustering.is_singletons()) {
      break;
    }
    Contraction contraction = contract(level_graph, clustering);
    if (config.first_level_only) {
      current = Constraint::none();
    } else {
      current = current.coarsened(contraction.map, contraction.coarse.n());
    }
    hierarchy.push(std::move(contraction));
  }
  return hierarchy;
}

Hierarchy build_hierarchy(SignedGraph &&, const Constraint &, const CoarseningConfig &, Rng &) = delete;

} // namespace scml
