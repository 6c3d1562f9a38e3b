/*******************************************************************************
 * Edge list ingestion (SNAP / KONECT / METIS-like headers), canonical edge
 * list output, clustering files and metrics records.
 *
 * @file:   io.hpp
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "scml/clustering.hpp"
#include "scml/definitions.hpp"
#include "scml/graph.hpp"

namespace scml {

enum class EdgeListFormat {
  /// "u v w" per line, exactly three fields.
  snap,
  /// "u v w [more columns]", extra columns (e.g. timestamps) ignored.
  konect,
  /// Like snap, but the "p <n> <m>" header line is mandatory.
  metis_like,
};

inline EdgeListFormat parse_format(std::string_view name) {
  if (name == "snap") {
    return EdgeListFormat::snap;
  }
  if (name == "konect") {
    return EdgeListFormat::konect;
  }
  if (name == "metis" || name == "metis-like") {
    return EdgeListFormat::metis_like;
  }
  throw InvalidInput("unknown edge list format '" + std::string(name) + "'");
}

class ParseError : public InvalidInput {
public:
  ParseError(std::size_t line, const std::string &what)
      : InvalidInput("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  [[nodiscard]] std::size_t line() const {
    return line_;
  }

private:
  std::size_t line_;
};

/// Raw records with contiguous node ids plus the original id of every node.
struct EdgeList {
  std::vector<EdgeRecord> records;
  NodeId n = 0;
  std::vector<std::uint64_t> original_ids;
};

namespace detail {
// commas separate fields too, for the CSV dumps of some collections
inline bool is_separator(char c) {
  return c == ',' || std::isspace(static_cast<unsigned char>(c));
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) {
      ++i;
    }
    const std::size_t begin = i;
    while (i < line.size() && !is_separator(line[i])) {
      ++i;
    }
    if (i > begin) {
      fields.push_back(line.substr(begin, i - begin));
    }
  }
  return fields;
}

inline std::optional<std::uint64_t> parse_id(std::string_view s) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

inline std::optional<double> parse_weight(std::string_view s) {
  // std::from_chars for double is available in libstdc++ 11
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}
} // namespace detail

/// Reads a whitespace (or comma) separated edge list. Lines starting with '#' or '%' are
/// comments. An optional "p <n> <m>" header preallocates; if every id is
/// below the declared n the ids are taken as is (keeping isolated nodes),
/// otherwise ids are remapped to 0..n-1 in increasing order.
inline EdgeList load_edge_list(std::istream &in, EdgeListFormat format = EdgeListFormat::snap) {
  struct RawEdge {
    std::uint64_t u;
    std::uint64_t v;
    double w;
  };
  std::vector<RawEdge> raw;
  std::optional<std::uint64_t> declared_n;
  bool seen_content = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0].front() == '#' || fields[0].front() == '%') {
      continue;
    }
    if (fields[0] == "p") {
      if (seen_content || declared_n) {
        throw ParseError(line_no, "header line must precede all edges");
      }
      if (fields.size() != 3) {
        throw ParseError(line_no, "header must read 'p <n> <m>'");
      }
      const auto n = detail::parse_id(fields[1]);
      const auto m = detail::parse_id(fields[2]);
      if (!n || !m) {
        throw ParseError(line_no, "non-numeric header");
      }
      declared_n = *n;
      raw.reserve(std::min<std::uint64_t>(*m, std::uint64_t{1} << 24));
      continue;
    }
    if (format == EdgeListFormat::metis_like && !declared_n) {
      throw ParseError(line_no, "missing 'p <n> <m>' header");
    }
    seen_content = true;

    if (fields.size() < 3) {
      throw ParseError(line_no, "expected 'u v w'");
    }
    if (fields.size() > 3 && format != EdgeListFormat::konect) {
      throw ParseError(line_no, "unexpected extra fields");
    }
    const auto u = detail::parse_id(fields[0]);
    const auto v = detail::parse_id(fields[1]);
    if (!u || !v) {
      throw ParseError(line_no, "malformed node id");
    }
    const auto w = detail::parse_weight(fields[2]);
    if (!w) {
      throw ParseError(line_no, "non-numeric weight '" + std::string(fields[2]) + "'");
    }
    raw.push_back({*u, *v, *w});
  }
  if (raw.empty() && !declared_n) {
    throw InvalidInput("empty input");
  }

  EdgeList list;
  std::uint64_t max_id = 0;
  for (const auto &e : raw) {
    max_id = std::max({max_id, e.u, e.v});
  }
  if (declared_n && (raw.empty() || max_id < *declared_n)) {
    if (*declared_n > std::numeric_limits<NodeId>::max() - 1) {
      throw InvalidInput("node count too large");
    }
    list.n = static_cast<NodeId>(*declared_n);
    list.original_ids.resize(list.n);
    std::iota(list.original_ids.begin(), list.original_ids.end(), 0);
    for (const auto &e : raw) {
      list.records.push_back({static_cast<NodeId>(e.u), static_cast<NodeId>(e.v), e.w});
    }
    return list;
  }

  std::vector<std::uint64_t> ids;
  ids.reserve(2 * raw.size());
  for (const auto &e : raw) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::uint64_t, NodeId> index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    index.emplace(ids[i], static_cast<NodeId>(i));
  }
  list.n = static_cast<NodeId>(ids.size());
  list.original_ids = std::move(ids);
  list.records.reserve(raw.size());
  for (const auto &e : raw) {
    list.records.push_back({index.at(e.u), index.at(e.v), e.w});
  }
  return list;
}

/// A normalized graph with the original ids of its nodes.
struct Instance {
  SignedGraph graph;
  std::vector<std::uint64_t> original_ids;
};

inline Instance read_instance(
    const std::string &path, EdgeListFormat format = EdgeListFormat::snap, NormalizeOptions options = {}
) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open '" + path + "'");
  }
  EdgeList list = load_edge_list(in, format);
  return {normalize(std::move(list.records), list.n, options), std::move(list.original_ids)};
}

inline std::string format_weight(EdgeWeight w) {
  std::ostringstream out;
  out << std::setprecision(17) << w;
  return out.str();
}

/// Normalized edge list with contiguous ids, a statistics comment and a
/// "p <n> <m>" header so that isolated nodes survive a reload.
inline void write_canonical_edge_list(std::ostream &out, const SignedGraph &g) {
  out << "# n=" << g.n() << " m_plus=" << g.m_plus() << " m_minus=" << g.m_minus()
      << " sum_neg=" << format_weight(g.sum_neg()) << '\n';
  out << "p " << g.n() << ' ' << g.m() << '\n';
  g.for_each_edge([&](NodeId u, NodeId v, EdgeWeight w) {
    out << u << ' ' << v << ' ' << format_weight(w) << '\n';
  });
}

/// Header metadata of a clustering file.
struct ClusteringHeader {
  EdgeWeight edge_cut = 0;
  std::optional<double> z_value;
  NodeId k = 0;
  double time_seconds = 0;
  std::uint64_t seed = 0;
};

/// "# key=value" header lines followed by "original_id cluster_id" per node.
/// Cluster ids are written in canonical form. Wall time sits on its own header
/// line so that it is the only run-dependent line of the file.
inline void write_clustering(
    std::ostream &out,
    const Clustering &c,
    std::span<const std::uint64_t> original_ids,
    const ClusteringHeader &header
) {
  out << "# edge_cut=" << format_weight(header.edge_cut) << '\n';
  out << "# z_value=" << (header.z_value ? format_weight(*header.z_value) : "undefined") << '\n';
  out << "# k=" << header.k << '\n';
  out << "# seed=" << header.seed << '\n';
  out << "# time_seconds=" << header.time_seconds << '\n';
  const Clustering canonical = c.canonical();
  for (NodeId u = 0; u < canonical.size(); ++u) {
    out << (original_ids.empty() ? u : original_ids[u]) << ' ' << canonical[u] << '\n';
  }
}

/// Reads the node lines of a clustering file; returns cluster ids indexed by
/// position of the original id in `original_ids`.
inline std::vector<ClusterId>
read_clustering(std::istream &in, std::span<const std::uint64_t> original_ids) {
  std::unordered_map<std::uint64_t, NodeId> index;
  for (std::size_t i = 0; i < original_ids.size(); ++i) {
    index.emplace(original_ids[i], static_cast<NodeId>(i));
  }
  std::vector<ClusterId> assignment(original_ids.size(), kInvalidCluster);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0].front() == '#') {
      continue;
    }
    const auto id = fields.size() == 2 ? detail::parse_id(fields[0]) : std::nullopt;
    const auto cluster = fields.size() == 2 ? detail::parse_id(fields[1]) : std::nullopt;
    if (!id || !cluster || !index.contains(*id)) {
      throw ParseError(line_no, "expected 'node_id cluster_id' for a known node");
    }
    assignment[index.at(*id)] = static_cast<ClusterId>(*cluster);
  }
  if (std::find(assignment.begin(), assignment.end(), kInvalidCluster) != assignment.end()) {
    throw InvalidInput("clustering file does not cover every node");
  }
  return assignment;
}

/// Flat metrics record of one run.
struct RunMetrics {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  EdgeWeight edge_cut = 0;
  std::optional<double> z_value;
  NodeId k = 0;
  double time_seconds = 0;
};

inline nlohmann::json to_json(const RunMetrics &m) {
  return {
      {"instance", m.instance},
      {"algorithm", m.algorithm},
      {"seed", m.seed},
      {"edge_cut", m.edge_cut},
      {"z_value", m.z_value ? nlohmann::json(*m.z_value) : nlohmann::json(nullptr)},
      {"k", m.k},
      {"time_seconds", m.time_seconds},
  };
}

/// Checks that `j` is a flat metrics record with the expected field types.
inline bool is_valid_metrics(const nlohmann::json &j) {
  return j.is_object() && j.size() == 7 && j.contains("instance") && j["instance"].is_string() &&
         j.contains("algorithm") && j["algorithm"].is_string() && j.contains("seed") &&
         j["seed"].is_number_unsigned() && j.contains("edge_cut") && j["edge_cut"].is_number() &&
         j.contains("z_value") && (j["z_value"].is_number() || j["z_value"].is_null()) &&
         j.contains("k") && j["k"].is_number_unsigned() && j.contains("time_seconds") &&
         j["time_seconds"].is_number();
}

/// Geometric mean of |cuts|, multiplied by -1 (all meaningful cuts are
/// negative).
inline double negated_geometric_mean(std::span<const EdgeWeight> cuts) {
  if (cuts.empty()) {
    return 0.0;
  }
  double log_sum = 0;
  for (const EdgeWeight c : cuts) {
    if (c == 0.0) {
      return 0.0;
    }
    log_sum += std::log(std::abs(c));
  }
  return -std::exp(log_sum / static_cast<double>(cuts.size()));
}

} // namespace scml
