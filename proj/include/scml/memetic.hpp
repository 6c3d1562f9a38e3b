/*******************************************************************************
 * Steady-state memetic algorithm on top of the multilevel solver: population
 * initialization, tournament selection, edge-blocking recombination and
 * mutation, and similarity-based replacement.
 *
 * @file:   memetic.hpp
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/coarsening.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/multilevel.hpp"

namespace scml {

using Clock = std::chrono::steady_clock;

/// A clustering together with its cut-edge set and fitness (edge-cut).
struct Individual {
  Clustering clustering;
  CutEdgeSet cut_edges;
  EdgeWeight fitness = 0;
  /// Insertion counter, smaller is older.
  std::uint64_t birth = 0;

  /// Derives cut edges and fitness from scratch.
  static Individual from_clustering(const SignedGraph &g, const Clustering &c) {
    std::vector<ClusterId> assignment(c.assignment().begin(), c.assignment().end());
    Individual ind;
    ind.clustering = Clustering(g, std::move(assignment));
    ind.cut_edges = scml::cut_edges(g, ind.clustering);
    ind.fitness = ind.clustering.cut();
    return ind;
  }
};

struct Population {
  std::vector<Individual> members;
  std::size_t capacity = 0;

  [[nodiscard]] std::size_t size() const {
    return members.size();
  }
  [[nodiscard]] std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
      if (members[i].fitness < members[best].fitness) {
        best = i;
      }
    }
    return best;
  }
};

struct EvoConfig {
  /// Wall-clock budget t_f in seconds, initialization included.
  double time_limit = 10.0;
  /// Mutation probability.
  double beta = 0.10;
  std::uint64_t seed = 0;
  MultilevelConfig multilevel{};

  /// Population size bounds and share of t_f spent on initialization.
  std::size_t min_alpha = 3;
  std::size_t max_alpha = 100;
  double init_time_share = 0.10;
  /// Initialization stops once this share of t_f is used up.
  double init_time_cap = 0.50;

  /// Fixed population size instead of the timing rule.
  std::optional<std::size_t> alpha;
  /// Stop after this many rounds (makes runs reproducible independent of speed).
  std::optional<std::uint64_t> max_rounds;
  /// Stop as soon as the incumbent reaches this cut.
  std::optional<EdgeWeight> target_cut;
};

/// alpha = clamp(round(share * t_total / t_single), lo, hi).
inline std::size_t choose_alpha(
    double t_single, double t_total, double share = 0.10, std::size_t lo = 3, std::size_t hi = 100
) {
  if (!(t_single > 0)) {
    return hi;
  }
  const double raw = std::round(share * t_total / t_single);
  return static_cast<std::size_t>(std::clamp(raw, static_cast<double>(lo), static_cast<double>(hi)));
}

/// Two size-2 tournaments. If both are won by the same individual, the loser of
/// the second tournament becomes the second parent.
inline std::pair<std::size_t, std::size_t> tournament_select(const Population &p, Rng &rng) {
  const std::size_t size = p.size();
  if (size < 2) {
    throw std::logic_error("tournament selection needs at least two individuals");
  }
  auto draw_pair = [&] {
    const std::size_t i = uniform_index(rng, size);
    std::size_t j = uniform_index(rng, size - 1);
    if (j >= i) {
      ++j;
    }
    return std::make_pair(i, j);
  };
  auto play = [&](std::size_t i, std::size_t j) {
    return p.members[j].fitness < p.members[i].fitness ? std::make_pair(j, i) : std::make_pair(i, j);
  };

  const auto [i1, j1] = draw_pair();
  const std::size_t first = play(i1, j1).first;
  const auto [i2, j2] = draw_pair();
  const auto [winner, loser] = play(i2, j2);
  return {first, winner == first ? loser : winner};
}

/// Offspring of two parents. Coarsening of the first cycle may not contract any
/// cut edge of either parent; on the coarsest graph the best of the parents'
/// images and the singleton clustering seeds uncoarsening, followed by global
/// search. The offspring is never worse than the better parent.
inline Individual recombine(
    const SignedGraph &g,
    const Individual &a,
    const Individual &b,
    const MultilevelConfig &config,
    std::uint64_t seed
) {
  Rng rng(seed);
  const Constraint constraint = Constraint::subset_of_both(g, a.clustering, b.clustering);
  const Clustering first = run_cycle(g, config, constraint, false, rng, [&](const Hierarchy &h) {
    const SignedGraph &coarsest = h.coarsest();
    Clustering best(coarsest, h.image_on_coarsest(a.clustering.assignment()));
    Clustering image_b(coarsest, h.image_on_coarsest(b.clustering.assignment()));
    if (image_b.cut() < best.cut()) {
      best = std::move(image_b);
    }
    Clustering singletons = Clustering::singletons(coarsest);
    if (singletons.cut() < best.cut()) {
      best = std::move(singletons);
    }
    return best;
  });
  return Individual::from_clustering(g, global_search(g, first, config, derive_seed(seed, 1)));
}

/// New individual built with `a`'s cut edges blocked in the first coarsening
/// step only. May be worse than `a`.
inline Individual mutate(
    const SignedGraph &g, const Individual &a, const MultilevelConfig &config, std::uint64_t seed
) {
  const Constraint constraint = Constraint::subset_of(g, a.clustering);
  const Clustering first = multilevel_cycle(g, config, derive_seed(seed, 0), constraint, true);
  return Individual::from_clustering(g, global_search(g, first, config, derive_seed(seed, 1)));
}

/// Inserts `c` unless it is strictly worse than every member. The member with
/// the smallest cut-edge symmetric difference to `c` is evicted; ties evict the
/// worse fitness, then the older member. Returns whether `c` was inserted.
inline bool replace(Population &p, Individual c) {
  if (p.members.size() < p.capacity) {
    p.members.push_back(std::move(c));
    return true;
  }
  if (p.members.empty()) {
    return false;
  }
  const bool worse_than_all = std::all_of(p.members.begin(), p.members.end(), [&](const auto &m) {
    return c.fitness > m.fitness;
  });
  if (worse_than_all) {
    return false;
  }

  std::size_t victim = 0;
  std::size_t victim_distance = symmetric_difference(p.members[0].cut_edges, c.cut_edges);
  for (std::size_t i = 1; i < p.members.size(); ++i) {
    const Individual &m = p.members[i];
    const std::size_t d = symmetric_difference(m.cut_edges, c.cut_edges);
    const Individual &v = p.members[victim];
    if (d < victim_distance ||
        (d == victim_distance &&
         (m.fitness > v.fitness || (m.fitness == v.fitness && m.birth < v.birth)))) {
      victim = i;
      victim_distance = d;
    }
  }
  p.members[victim] = std::move(c);
  return true;
}

/// Reports (seconds since start, best cut) whenever the incumbent improves.
using ProgressCallback = std::function<void(double, EdgeWeight)>;

/// One island's evolutionary loop, stepped externally so that migration can be
/// interleaved between rounds.
class MemeticEngine {
public:
  MemeticEngine(const SignedGraph &g, EvoConfig config, Clock::time_point start)
      : graph_(&g),
        config_(std::move(config)),
        start_(start),
        deadline_(start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(config_.time_limit)
                          )),
        rng_(derive_seed(config_.seed, kRoundStream)) {}

  void set_progress(ProgressCallback progress) {
    progress_ = std::move(progress);
  }

  /// Builds the initial population. The first run is timed to choose alpha.
  void initialize() {
    const auto t0 = Clock::now();
    Individual first = Individual::from_clustering(
        *graph_, solve_multilevel(*graph_, config_.multilevel, next_seed())
    );
    const double t_single = std::chrono::duration<double>(Clock::now() - t0).count();
    alpha_ = config_.alpha.value_or(choose_alpha(
        t_single, config_.time_limit, config_.init_time_share, config_.min_alpha, config_.max_alpha
    ));
    population_.capacity = alpha_;
    insert(std::move(first));

    const auto cap = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                                  config_.init_time_cap * config_.time_limit
                              ));
    while (population_.size() < alpha_ && !target_reached()) {
      if (!config_.alpha && Clock::now() >= cap) {
        break;
      }
      insert(Individual::from_clustering(
          *graph_, solve_multilevel(*graph_, config_.multilevel, next_seed())
      ));
    }
    if (population_.size() < config_.min_alpha && population_.size() < alpha_ && !target_reached()) {
      std::fprintf(
          stderr,
          "warning: time budget allowed only %zu initial individuals\n",
          population_.size()
      );
    }
  }

  /// One steady-state round: recombination with probability 1 - beta,
  /// otherwise mutation of a uniformly drawn member.
  [[nodiscard]] Individual make_offspring() {
    ++rounds_;
    const double u = uniform_real(rng_);
    const std::uint64_t seed = next_seed();
    if (u > config_.beta && population_.size() >= 2) {
      const auto [a, b] = tournament_select(population_, rng_);
      ++recombinations_;
      return recombine(*graph_, population_.members[a], population_.members[b], config_.multilevel, seed);
    }
    const std::size_t a = uniform_index(rng_, population_.size());
    ++mutations_;
    return mutate(*graph_, population_.members[a], config_.multilevel, seed);
  }

  /// The single replacement path for local offspring and migrants.
  bool insert(Individual c) {
    ++replace_calls_;
    c.birth = births_++;
    if (!has_incumbent_ || c.fitness < incumbent_.fitness) {
      incumbent_ = c;
      has_incumbent_ = true;
      if (progress_) {
        progress_(elapsed(), incumbent_.fitness);
      }
    }
    return replace(population_, std::move(c));
  }

  void step() {
    insert(make_offspring());
  }

  [[nodiscard]] bool should_stop() const {
    return Clock::now() >= deadline_ || target_reached() ||
           (config_.max_rounds && rounds_ >= *config_.max_rounds);
  }

  [[nodiscard]] bool target_reached() const {
    return has_incumbent_ && config_.target_cut && incumbent_.fitness <= *config_.target_cut;
  }

  [[nodiscard]] double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  [[nodiscard]] const Population &population() const {
    return population_;
  }
  /// Best individual ever seen, kept outside the population.
  [[nodiscard]] const Individual &incumbent() const {
    return incumbent_;
  }
  [[nodiscard]] const Individual &population_best() const {
    return population_.members[population_.best_index()];
  }
  [[nodiscard]] std::size_t alpha() const {
    return alpha_;
  }
  [[nodiscard]] std::uint64_t rounds() const {
    return rounds_;
  }
  [[nodiscard]] std::uint64_t replace_calls() const {
    return replace_calls_;
  }
  [[nodiscard]] std::uint64_t recombinations() const {
    return recombinations_;
  }
  [[nodiscard]] std::uint64_t mutations() const {
    return mutations_;
  }
  [[nodiscard]] const SignedGraph &graph() const {
    return *graph_;
  }

private:
  static constexpr std::uint64_t kRoundStream = ~std::uint64_t{0};

  std::uint64_t next_seed() {
    return derive_seed(config_.seed, seed_counter_++);
  }

  const SignedGraph *graph_;
  EvoConfig config_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  Rng rng_;
  ProgressCallback progress_;

  Population population_;
  Individual incumbent_;
  bool has_incumbent_ = false;
  std::size_t alpha_ = 0;

  std::uint64_t seed_counter_ = 0;
  std::uint64_t births_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t replace_calls_ = 0;
  std::uint64_t recombinations_ = 0;
  std::uint64_t mutations_ = 0;
};

/// Population of alpha individuals from independent multilevel runs.
inline Population init_population(const SignedGraph &g, const EvoConfig &config) {
  MemeticEngine engine(g, config, Clock::now());
  engine.initialize();
  return engine.population();
}

/// Runs the memetic loop until the time limit (or round/target limit) and
/// returns the best clustering ever found. A round in flight at the deadline
/// completes first.
inline Clustering
evolve(const SignedGraph &g, const EvoConfig &config, ProgressCallback progress = {}) {
  MemeticEngine engine(g, config, Clock::now());
  engine.set_progress(std::move(progress));
  engine.initialize();
  while (!engine.should_stop()) {
    engine.step();
  }
  return engine.incumbent().clustering;
}

} // namespace scml
