/*******************************************************************************
 * Island model: independent memetic loops in worker threads that push their
 * best individual to not-yet-informed peers (randomized rumor spreading) and
 * feed received individuals through the ordinary replacement rule.
 *
 * @file:   islands.hpp
 ******************************************************************************/
#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"
#include "scml/memetic.hpp"

namespace scml {

/// Assignment snapshot sent between islands. Fitness is revalidated on receipt.
struct Migrant {
  std::vector<ClusterId> assignment;
  EdgeWeight claimed_fitness = 0;
  std::size_t from = 0;
};

class Mailbox {
public:
  void post(Migrant migrant) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(migrant));
  }

  /// Takes everything queued right now, never blocks on an empty box.
  std::vector<Migrant> drain() {
    std::lock_guard lock(mutex_);
    std::vector<Migrant> out;
    out.swap(queue_);
    return out;
  }

private:
  std::mutex mutex_;
  std::vector<Migrant> queue_;
};

struct IslandStats {
  std::size_t island = 0;
  bool failed = false;
  std::string error;
  bool has_result = false;
  EdgeWeight best_fitness = std::numeric_limits<EdgeWeight>::infinity();
  std::uint64_t rounds = 0;
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  std::uint64_t rejected = 0;
  std::uint64_t replace_calls = 0;
};

struct IslandsResult {
  Clustering best;
  std::size_t best_island = 0;
  std::vector<IslandStats> islands;
};

struct IslandOptions {
  /// Called before every round; may throw to simulate a failing island.
  std::function<void(std::size_t island, std::uint64_t round)> round_hook;
  /// (island, seconds, best cut) on every incumbent improvement.
  std::function<void(std::size_t island, double seconds, EdgeWeight best)> progress;
  /// Subtracted from every outgoing fitness claim. Test hook for the
  /// receive-side validation.
  EdgeWeight corrupt_claims = 0;
};

/// Island 0 uses the master seed itself, so a single island reproduces evolve().
inline std::uint64_t island_seed(std::uint64_t master, std::size_t island) {
  return island == 0 ? master : derive_seed(master, 0x15a4d000ULL + island);
}

namespace detail {
struct IslandOutcome {
  IslandStats stats;
  std::optional<Individual> best;
};

inline void run_island(
    const SignedGraph &g,
    const EvoConfig &base,
    std::size_t island,
    std::vector<Mailbox> &mailboxes,
    std::atomic<bool> &stop_all,
    const IslandOptions &options,
    Clock::time_point start,
    IslandOutcome &outcome
) {
  const std::size_t num_islands = mailboxes.size();
  IslandStats &stats = outcome.stats;
  stats.island = island;

  EvoConfig config = base;
  config.seed = island_seed(base.seed, island);
  MemeticEngine engine(g, config, start);
  if (options.progress) {
    engine.set_progress([&](double t, EdgeWeight best) { options.progress(island, t, best); });
  }

  Rng comm_rng(derive_seed(config.seed, 0xc0ffeeULL));
  std::vector<char> informed(num_islands, 0);
  std::size_t informed_count = 0;
  std::uint64_t current_best_birth = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::size_t> candidates;

  auto record = [&] {
    stats.rounds = engine.rounds();
    stats.replace_calls = engine.replace_calls();
    if (engine.population().size() > 0) {
      outcome.best = engine.incumbent();
      stats.best_fitness = engine.incumbent().fitness;
      stats.has_result = true;
    }
  };

  try {
    engine.initialize();
    record();
    while (!engine.should_stop() && !stop_all.load(std::memory_order_relaxed)) {
      if (options.round_hook) {
        options.round_hook(island, engine.rounds());
      }
      engine.step();

      if (num_islands > 1) {
        const Individual &best = engine.population_best();
        if (best.birth != current_best_birth || informed_count == num_islands - 1) {
          std::fill(informed.begin(), informed.end(), 0);
          informed_count = 0;
          current_best_birth = best.birth;
        }
        candidates.clear();
        for (std::size_t j = 0; j < num_islands; ++j) {
          if (j != island && !informed[j]) {
            candidates.push_back(j);
          }
        }
        const std::size_t to = candidates[uniform_index(comm_rng, candidates.size())];
        informed[to] = 1;
        ++informed_count;
        const auto assignment = best.clustering.assignment();
        mailboxes[to].post(
            {{assignment.begin(), assignment.end()}, best.fitness - options.corrupt_claims, island}
        );
        ++stats.sent;
      }

      for (Migrant &migrant : mailboxes[island].drain()) {
        Clustering received(g, std::move(migrant.assignment));
        if (received.cut() != migrant.claimed_fitness) {
          ++stats.rejected;
          continue;
        }
        ++stats.received;
        engine.insert(Individual::from_clustering(g, received));
      }
      record();
    }
    record();
    if (engine.target_reached()) {
      stop_all.store(true, std::memory_order_relaxed);
    }
  } catch (const std::exception &e) {
    stats.failed = true;
    stats.error = e.what();
  } catch (...) {
    stats.failed = true;
    stats.error = "unknown failure";
  }
}
} // namespace detail

/// Runs `num_islands` memetic loops concurrently on the shared graph and returns
/// the best incumbent over all islands that produced one. Failing islands are
/// reported in the stats; the others continue.
inline IslandsResult
run_islands(const SignedGraph &g, const EvoConfig &config, std::size_t num_islands, IslandOptions options = {}) {
  if (num_islands == 0) {
    throw std::invalid_argument("at least one island is required");
  }
  std::vector<Mailbox> mailboxes(num_islands);
  std::vector<detail::IslandOutcome> outcomes(num_islands);
  std::atomic<bool> stop_all{false};
  const auto start = Clock::now();

  if (num_islands == 1) {
    detail::run_island(g, config, 0, mailboxes, stop_all, options, start, outcomes[0]);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(num_islands);
    for (std::size_t i = 0; i < num_islands; ++i) {
      workers.emplace_back([&, i] {
        detail::run_island(g, config, i, mailboxes, stop_all, options, start, outcomes[i]);
      });
    }
    for (auto &worker : workers) {
      worker.join();
    }
  }

  IslandsResult result;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < num_islands; ++i) {
    result.islands.push_back(outcomes[i].stats);
    if (!outcomes[i].stats.failed && outcomes[i].best &&
        (!best || outcomes[i].best->fitness < outcomes[*best].best->fitness)) {
      best = i;
    }
  }
  if (!best) {
    throw std::runtime_error("no surviving island produced a clustering");
  }
  result.best_island = *best;
  result.best = outcomes[*best].best->clustering;
  return result;
}

} // namespace scml
