/*******************************************************************************
 * Command line front end: cluster an instance with any algorithm, generate
 * planted instances and convert raw edge lists to canonical form.
 *
 * @file:   scml_cli.cpp
 ******************************************************************************/
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scml/scml.hpp"

namespace {

using namespace scml;

struct ClusterOptions {
  std::string algo;
  std::string input;
  std::string output;
  std::string metrics;
  std::string format = "snap";
  std::uint64_t seed = 0;
  std::size_t repeat = 1;
  bool repeat_parallel = false;
  double time_limit = 10.0;
  std::size_t islands = std::max(1u, std::thread::hardware_concurrency());
  double beta = 0.10;
  int lp_rounds = 10;
  int fm_stall_limit = 15;
  bool raw_weights = false;
  std::size_t alpha = 0;
  std::uint64_t rounds = 0;
  bool require_z_value = false;
  bool quiet = false;
};

struct RunResult {
  Clustering clustering;
  RunMetrics metrics;
};

std::mutex output_mutex;

void progress_line(const std::string &prefix, double t, EdgeWeight best) {
  std::lock_guard lock(output_mutex);
  std::cerr << prefix << "t=" << t << " best_cut=" << format_weight(best) << '\n';
}

RunResult run_once(const ClusterOptions &opt, const Instance &instance, std::uint64_t seed) {
  const SignedGraph &g = instance.graph;
  const MultilevelConfig ml{opt.lp_rounds, opt.fm_stall_limit};
  const auto t0 = std::chrono::steady_clock::now();

  Clustering result;
  if (opt.algo == "scml") {
    result = solve_multilevel(g, ml, seed);
  } else if (opt.algo == "gaec") {
    result = gaec(g);
  } else if (opt.algo == "brute") {
    result = brute_force_optimal(g).clustering;
  } else if (opt.algo == "evo") {
    EvoConfig config;
    config.time_limit = opt.time_limit;
    config.beta = opt.beta;
    config.seed = seed;
    config.multilevel = ml;
    if (opt.alpha > 0) {
      config.alpha = opt.alpha;
    }
    if (opt.rounds > 0) {
      config.max_rounds = opt.rounds;
    }
    IslandOptions island_options;
    EdgeWeight global_best = std::numeric_limits<EdgeWeight>::infinity();
    if (!opt.quiet) {
      island_options.progress = [&](std::size_t island, double t, EdgeWeight best) {
        if (opt.islands > 1) {
          progress_line("island=" + std::to_string(island) + " ", t, best);
        }
        std::lock_guard lock(output_mutex);
        if (best < global_best) {
          global_best = best;
          std::cerr << "t=" << t << " best_cut=" << format_weight(best) << '\n';
        }
      };
    }
    const IslandsResult islands = run_islands(g, config, opt.islands, island_options);
    for (const auto &stats : islands.islands) {
      if (stats.failed) {
        std::cerr << "island " << stats.island << " failed: " << stats.error << '\n';
      }
    }
    result = islands.best;
  } else {
    throw InvalidInput("unknown algorithm '" + opt.algo + "'");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunMetrics m;
  m.instance = std::filesystem::path(opt.input).stem().string();
  m.algorithm = opt.algo;
  m.seed = seed;
  m.edge_cut = edge_cut(g, result);
  if (g.sum_neg() != 0.0) {
    m.z_value = z_value(g, m.edge_cut);
  }
  m.k = result.num_clusters();
  m.time_seconds = seconds;
  return {std::move(result), m};
}

int run_cluster(const ClusterOptions &opt) {
  const Instance instance =
      read_instance(opt.input, parse_format(opt.format), {.raw_weights = opt.raw_weights});
  if (opt.require_z_value && instance.graph.sum_neg() == 0.0) {
    throw UndefinedMetric("z_value requested but the graph has no negative edges");
  }
  if (opt.repeat == 0) {
    throw InvalidInput("--repeat must be at least 1");
  }

  std::vector<RunResult> runs(opt.repeat);
  if (opt.repeat_parallel && opt.repeat > 1) {
    const std::size_t workers =
        std::min<std::size_t>(opt.repeat, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < opt.repeat; i += workers) {
            runs[i] = run_once(opt, instance, opt.seed + i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto &t : threads) {
      t.join();
    }
    for (const auto &e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  } else {
    for (std::size_t i = 0; i < opt.repeat; ++i) {
      runs[i] = run_once(opt, instance, opt.seed + i);
    }
  }

  std::size_t best = 0;
  std::vector<EdgeWeight> cuts;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    cuts.push_back(runs[i].metrics.edge_cut);
    if (runs[i].metrics.edge_cut < runs[best].metrics.edge_cut) {
      best = i;
    }
  }

  std::ofstream metrics_file;
  if (!opt.metrics.empty()) {
    metrics_file.open(opt.metrics);
    if (!metrics_file) {
      throw InvalidInput("cannot write '" + opt.metrics + "'");
    }
  }
  std::ostream &metrics_out = opt.metrics.empty() ? std::cout : metrics_file;
  for (const auto &run : runs) {
    metrics_out << to_json(run.metrics).dump() << '\n';
  }
  if (opt.repeat > 1) {
    const nlohmann::json summary = {
        {"instance", runs[best].metrics.instance},
        {"algorithm", opt.algo},
        {"repeats", opt.repeat},
        {"best_seed", runs[best].metrics.seed},
        {"min_edge_cut", runs[best].metrics.edge_cut},
        {"geomean_edge_cut", negated_geometric_mean(cuts)},
    };
    metrics_out << summary.dump() << '\n';
  }

  if (!opt.output.empty()) {
    std::ofstream out(opt.output);
    if (!out) {
      throw InvalidInput("cannot write '" + opt.output + "'");
    }
    const RunMetrics &m = runs[best].metrics;
    write_clustering(
        out, runs[best].clustering, instance.original_ids, {m.edge_cut, m.z_value, m.k, m.time_seconds, m.seed}
    );
  }
  return 0;
}

int run_gen_planted(const PlantedConfig &config, const std::string &output) {
  const PlantedInstance planted = generate_planted(config);
  std::ofstream out(output);
  if (!out) {
    throw InvalidInput("cannot write '" + output + "'");
  }
  write_canonical_edge_list(out, planted.graph);

  std::ofstream truth(output + ".truth");
  if (!truth) {
    throw InvalidInput("cannot write '" + output + ".truth'");
  }
  const Clustering c(planted.graph, planted.truth);
  std::optional<double> z;
  if (planted.graph.sum_neg() != 0.0) {
    z = z_value(planted.graph, c.cut());
  }
  write_clustering(truth, c, {}, {c.cut(), z, c.num_clusters(), 0.0, config.seed});
  return 0;
}

int run_convert(
    const std::string &input, const std::string &output, const std::string &format, bool raw_weights
) {
  const Instance instance = read_instance(input, parse_format(format), {.raw_weights = raw_weights});
  std::ofstream out(output);
  if (!out) {
    throw InvalidInput("cannot write '" + output + "'");
  }
  write_canonical_edge_list(out, instance.graph);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multilevel and memetic signed graph clustering"};
  app.require_subcommand(1);

  ClusterOptions cluster;
  auto *cmd_cluster = app.add_subcommand("cluster", "Cluster a signed graph");
  cmd_cluster->add_option("--algo", cluster.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"scml", "evo", "gaec", "brute"}));
  cmd_cluster->add_option("--input", cluster.input, "Edge list file")->required();
  cmd_cluster->add_option("--format", cluster.format, "snap | konect | metis-like")
      ->check(CLI::IsMember({"snap", "konect", "metis", "metis-like"}));
  cmd_cluster->add_option("--output", cluster.output, "Clustering output file");
  cmd_cluster->add_option("--metrics", cluster.metrics, "Metrics JSON file (default: stdout)");
  cmd_cluster->add_option("--seed", cluster.seed, "Master seed");
  cmd_cluster->add_option("--repeat", cluster.repeat, "Number of seeds (seed, seed+1, ...)");
  cmd_cluster->add_flag("--repeat-parallel", cluster.repeat_parallel, "Run repeats concurrently");
  cmd_cluster->add_option("--time-limit", cluster.time_limit, "Memetic time limit in seconds")
      ->check(CLI::PositiveNumber);
  cmd_cluster->add_option("--islands", cluster.islands, "Number of memetic islands")
      ->check(CLI::PositiveNumber);
  cmd_cluster->add_option("--beta", cluster.beta, "Mutation probability")->check(CLI::Range(0.0, 1.0));
  cmd_cluster->add_option("--lp-rounds", cluster.lp_rounds, "Label propagation rounds")
      ->check(CLI::PositiveNumber);
  cmd_cluster->add_option("--fm-stall-limit", cluster.fm_stall_limit, "FM stall limit")
      ->check(CLI::PositiveNumber);
  cmd_cluster->add_flag("--raw-weights", cluster.raw_weights, "Keep summed weights instead of +-1");
  cmd_cluster->add_option("--alpha", cluster.alpha, "Fixed memetic population size");
  cmd_cluster->add_option("--rounds", cluster.rounds, "Stop the memetic loop after this many rounds");
  cmd_cluster->add_flag(
      "--require-z-value", cluster.require_z_value, "Fail if the z_value is undefined"
  );
  cmd_cluster->add_flag("--quiet", cluster.quiet, "No progress lines");

  PlantedConfig planted;
  std::string planted_output;
  auto *cmd_planted = app.add_subcommand("gen-planted", "Generate a planted partition instance");
  cmd_planted->add_option("--k", planted.k, "Number of clusters")->required();
  cmd_planted->add_option("--size", planted.size, "Nodes per cluster")->required();
  cmd_planted->add_option("--p-in", planted.p_in, "Intra-cluster edge probability");
  cmd_planted->add_option("--p-out", planted.p_out, "Inter-cluster edge probability");
  cmd_planted->add_option("--noise", planted.noise, "Sign flip probability");
  cmd_planted->add_option("--seed", planted.seed, "Seed");
  cmd_planted->add_option("--output", planted_output, "Edge list output")->required();

  std::string convert_input;
  std::string convert_output;
  std::string convert_format = "snap";
  bool convert_raw = false;
  auto *cmd_convert = app.add_subcommand("convert", "Normalize an edge list");
  cmd_convert->add_option("--input", convert_input, "Raw edge list")->required();
  cmd_convert->add_option("--output", convert_output, "Canonical edge list")->required();
  cmd_convert->add_option("--format", convert_format, "snap | konect | metis-like");
  cmd_convert->add_flag("--raw-weights", convert_raw, "Keep summed weights instead of +-1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_cluster) {
      return run_cluster(cluster);
    }
    if (*cmd_planted) {
      return run_gen_planted(planted, planted_output);
    }
    if (*cmd_convert) {
      return run_convert(convert_input, convert_output, convert_format, convert_raw);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
