/*******************************************************************************
 * Multilevel signed graph clustering: coarsen until no merge is found, start
 * from singletons on the coarsest graph, refine while uncoarsening, then run
 * a second, constrained cycle (global search) seeded with the result.
 *
 * @file:   multilevel.hpp
 ******************************************************************************/
#pragma once

#include <utility>

#include "scml/clustering.hpp"
#include "scml/coarsening.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/refinement.hpp"

namespace scml {

struct MultilevelConfig {
  int lp_rounds = 10;
  int fm_stall_limit = 15;
};

/// Applies label propagation and FM refinement to `c` on `g`.
inline Clustering
refine_level(const SignedGraph &g, const Clustering &c, const MultilevelConfig &config, Rng &rng) {
  Clustering refined = lp_refine(g, c, config.lp_rounds, rng);
  return fm_refine(g, refined, config.fm_stall_limit);
}

/// Uncoarsens a clustering of the hierarchy's coarsest graph level by level,
/// refining on every level including the coarsest.
inline Clustering uncoarsen(
    const Hierarchy &hierarchy, Clustering coarsest, const MultilevelConfig &config, Rng &rng
) {
  std::size_t level = hierarchy.num_levels() - 1;
  Clustering current = refine_level(hierarchy.graph(level), coarsest, config, rng);
  while (level > 0) {
    --level;
    current = project_to_finer(hierarchy.graph(level), current, hierarchy.map_to_coarser(level));
    current = refine_level(hierarchy.graph(level), current, config, rng);
  }
  return current;
}

/// One multilevel cycle. `initial(hierarchy)` yields the clustering of the
/// coarsest graph that uncoarsening starts from.
template <typename InitialClustering>
Clustering run_cycle(
    const SignedGraph &g,
    const MultilevelConfig &config,
    const Constraint &constraint,
    bool first_level_only,
    Rng &rng,
    InitialClustering &&initial
) {
  const Hierarchy hierarchy =
      build_hierarchy(g, constraint, {config.lp_rounds, first_level_only}, rng);
  Clustering start = initial(hierarchy);
  return uncoarsen(hierarchy, std::move(start), config, rng);
}

/// First multilevel cycle, starting from singletons on the coarsest graph.
/// With `first_level_only` the constraint restricts only the first
/// coarsening step.
inline Clustering multilevel_cycle(
    const SignedGraph &g,
    const MultilevelConfig &config,
    std::uint64_t seed,
    const Constraint &constraint = Constraint::none(),
    bool first_level_only = false
) {
  Rng rng(seed);
  return run_cycle(g, config, constraint, first_level_only, rng, [](const Hierarchy &h) {
    return Clustering::singletons(h.coarsest());
  });
}

/// Second cycle: coarsening may only merge within clusters of `start`, so
/// every cut edge of `start` survives, and uncoarsening begins from the image
/// of `start` on the coarsest graph. Never returns a larger cut than `start`.
inline Clustering global_search(
    const SignedGraph &g, const Clustering &start, const MultilevelConfig &config, std::uint64_t seed
) {
  Rng rng(seed);
  const Constraint constraint = Constraint::subset_of(g, start);
  return run_cycle(g, config, constraint, false, rng, [&](const Hierarchy &h) {
    return Clustering::with_known_cut(h.image_on_coarsest(start.assignment()), start.cut());
  });
}

/// Full pipeline: first cycle followed by global search. The returned cut is
/// recomputed from scratch.
inline Clustering
solve_multilevel(const SignedGraph &g, const MultilevelConfig &config, std::uint64_t seed) {
  const Clustering first = multilevel_cycle(g, config, derive_seed(seed, 0));
  Clustering second = global_search(g, first, config, derive_seed(seed, 1));
  std::vector<ClusterId> assignment(second.assignment().begin(), second.assignment().end());
  return Clustering(g, std::move(assignment));
}

} // namespace scml
