#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "scml/clustering.hpp"
#include "scml/graph.hpp"
#include "scml/io.hpp"

#include "test_support.hpp"

namespace scml {
namespace {

using testing::g_tri;
using testing::g_twin;

EdgeList parse(const std::string &text, EdgeListFormat format = EdgeListFormat::snap) {
  std::istringstream in(text);
  return load_edge_list(in, format);
}

TEST(LoadEdgeList, ParsesSingleRecord) {
  const EdgeList list = parse("0 1 -1\n");
  ASSERT_EQ(list.records.size(), 1u);
  EXPECT_EQ(list.records[0], (EdgeRecord{0, 1, -1.0}));
  EXPECT_EQ(list.n, 2u);
}

TEST(LoadEdgeList, SkipsComments) {
  const EdgeList list = parse("# comment\n% konect comment\n0 1 2\n");
  ASSERT_EQ(list.records.size(), 1u);
  EXPECT_EQ(list.records[0], (EdgeRecord{0, 1, 2.0}));
}

TEST(LoadEdgeList, KeepsDuplicatesForNormalization) {
  const EdgeList list = parse("0 1 1\n0 1 1\n");
  EXPECT_EQ(list.records.size(), 2u);
}

TEST(LoadEdgeList, RemapsArbitraryIdsAndKeepsOriginals) {
  const EdgeList list = parse("100 7 1\n7 42 -1\n");
  EXPECT_EQ(list.n, 3u);
  EXPECT_EQ(list.original_ids, (std::vector<std::uint64_t>{7, 42, 100}));
  EXPECT_EQ(list.records[0], (EdgeRecord{2, 0, 1.0}));
  EXPECT_EQ(list.records[1], (EdgeRecord{0, 1, -1.0}));
}

TEST(LoadEdgeList, HeaderKeepsIsolatedNodes) {
  const EdgeList list = parse("p 5 1\n0 3 1\n");
  EXPECT_EQ(list.n, 5u);
  EXPECT_EQ(list.records[0], (EdgeRecord{0, 3, 1.0}));
}

TEST(LoadEdgeList, KonectIgnoresExtraColumns) {
  const EdgeList list = parse("% sym signed\n1 2 -1 1234567\n", EdgeListFormat::konect);
  ASSERT_EQ(list.records.size(), 1u);
  EXPECT_EQ(list.records[0].w, -1.0);
  EXPECT_THROW(parse("1 2 -1 1234567\n", EdgeListFormat::snap), ParseError);
}

TEST(LoadEdgeList, AcceptsCommaSeparatedColumns) {
  const EdgeList list = parse("7,9,-10,1407470400\n", EdgeListFormat::konect);
  ASSERT_EQ(list.records.size(), 1u);
  EXPECT_EQ(list.records[0], (EdgeRecord{0, 1, -10.0}));
}

TEST(LoadEdgeList, MetisLikeRequiresHeader) {
  EXPECT_THROW(parse("0 1 1\n", EdgeListFormat::metis_like), ParseError);
  EXPECT_EQ(parse("p 2 1\n0 1 1\n", EdgeListFormat::metis_like).n, 2u);
}

TEST(LoadEdgeList, ReportsLineNumberOfMalformedLine) {
  try {
    parse("0 1 1\n# ok\n2 x 1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadEdgeList, RejectsNonNumericWeightAndEmptyInput) {
  EXPECT_THROW(parse("0 1 abc\n"), ParseError);
  EXPECT_THROW(parse("0 1\n"), ParseError);
  EXPECT_THROW(parse(""), InvalidInput);
  EXPECT_THROW(parse("# only comments\n"), InvalidInput);
}

TEST(Normalize, SumsOppositeArcsAndQuantizes) {
  const SignedGraph g = normalize({{0, 1, 3.0}, {1, 0, -1.0}}, 2);
  ASSERT_EQ(g.m(), 1u);
  EXPECT_EQ(g.edge_weight(0, 1), 1.0);
}

TEST(Normalize, DropsSelfEdges) {
  const SignedGraph g = normalize({{2, 2, 5.0}}, 3);
  EXPECT_EQ(g.m(), 0u);
  EXPECT_FALSE(g.find_violation());
}

TEST(Normalize, ZeroSumPairVanishes) {
  const SignedGraph g = normalize({{0, 1, 1.0}, {0, 1, -1.0}}, 2);
  EXPECT_EQ(g.m(), 0u);
  EXPECT_EQ(g.m_plus() + g.m_minus(), 0u);
  EXPECT_EQ(g.sum_neg(), 0.0);
  EXPECT_FALSE(g.find_violation());
}

TEST(Normalize, RawWeightsKeepSums) {
  const SignedGraph g = normalize({{0, 1, 3.0}, {1, 0, -1.0}, {1, 2, -2.5}}, 3, {.raw_weights = true});
  EXPECT_EQ(g.edge_weight(0, 1), 2.0);
  EXPECT_EQ(g.edge_weight(2, 1), -2.5);
  EXPECT_EQ(g.sum_neg(), -2.5);
}

TEST(Normalize, IsIdempotentAndSymmetric) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EdgeRecord> records;
    std::uniform_int_distribution<NodeId> node(0, 9);
    std::uniform_int_distribution<int> weight(-3, 3);
    for (int i = 0; i < 40; ++i) {
      records.push_back({node(rng), node(rng), static_cast<double>(weight(rng))});
    }
    const SignedGraph once = normalize(records, 10);
    ASSERT_FALSE(once.find_violation()) << *once.find_violation();
    const SignedGraph twice = normalize(once.edges(), once.n());
    EXPECT_EQ(once.edges(), twice.edges());
    once.for_each_edge([&](NodeId u, NodeId v, EdgeWeight w) {
      EXPECT_TRUE(w == 1.0 || w == -1.0);
      EXPECT_EQ(once.edge_weight(v, u), w);
    });
  }
}

TEST(SignedGraph, Statistics) {
  const SignedGraph g = g_twin();
  EXPECT_EQ(g.n(), 4u);
  EXPECT_EQ(g.m(), 4u);
  EXPECT_EQ(g.m_plus(), 2u);
  EXPECT_EQ(g.m_minus(), 2u);
  EXPECT_EQ(g.sum_neg(), -2.0);
  EXPECT_EQ(g.total_edge_weight(), 2.0);
  EXPECT_FALSE(g.find_violation());
}

TEST(Contract, TwinIntoTwoNodes) {
  const SignedGraph g = g_twin();
  const Contraction c = contract(g, std::vector<ClusterId>{0, 0, 1, 1});
  EXPECT_EQ(c.coarse.n(), 2u);
  EXPECT_EQ(c.coarse.node_weight(0), 2.0);
  EXPECT_EQ(c.coarse.node_weight(1), 2.0);
  EXPECT_EQ(c.coarse.m(), 1u);
  EXPECT_EQ(c.coarse.edge_weight(0, 1), -2.0);
}

TEST(Contract, TriangleRemovesInternalEdge) {
  const SignedGraph g = g_tri();
  const Contraction c = contract(g, std::vector<ClusterId>{0, 1, 0});
  EXPECT_EQ(c.coarse.n(), 2u);
  EXPECT_EQ(c.coarse.m(), 1u);
  EXPECT_EQ(c.coarse.edge_weight(c.map[0], c.map[1]), 2.0);
}

TEST(Contract, SingletonsGiveIsomorphicGraph) {
  const SignedGraph g = g_twin();
  const Contraction c = contract(g, std::vector<ClusterId>{0, 1, 2, 3});
  EXPECT_EQ(c.coarse.edges(), g.edges());
}

TEST(Contract, NonContiguousIdsAreReindexed) {
  const SignedGraph g = g_twin();
  const Contraction c = contract(g, std::vector<ClusterId>{70, 70, 5'000'000, 5'000'000});
  EXPECT_EQ(c.coarse.n(), 2u);
  EXPECT_EQ(c.map, (std::vector<NodeId>{0, 0, 1, 1}));
}

TEST(Contract, ZeroSumCoarseEdgesDropped) {
  // (0,2)+1 and (1,2)-1 cancel between clusters {0,1} and {2}
  const SignedGraph g = SignedGraph::from_edges(3, {{0, 2, 1.0}, {1, 2, -1.0}, {0, 1, 1.0}});
  const Contraction c = contract(g, std::vector<ClusterId>{0, 0, 1});
  EXPECT_EQ(c.coarse.m(), 0u);
}

TEST(Contract, PreservesCutOfLiftedClusterings) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<NodeId> size(1, 32);
  for (int trial = 0; trial < 200; ++trial) {
    const NodeId n = size(rng);
    const SignedGraph g = testing::random_signed_graph(rng, n, 0.3, 3);
    const auto fine = testing::random_assignment(rng, n, 1 + n / 3);
    const Contraction c = contract(g, fine);
    ASSERT_FALSE(c.coarse.find_violation()) << *c.coarse.find_violation();
    EXPECT_EQ(c.coarse.total_node_weight(), g.total_node_weight());
    EXPECT_GE(c.coarse.sum_neg(), g.sum_neg());

    const auto coarse_assignment = testing::random_assignment(rng, c.coarse.n(), 4);
    std::vector<ClusterId> lifted(n);
    for (NodeId u = 0; u < n; ++u) {
      lifted[u] = coarse_assignment[c.map[u]];
    }
    EXPECT_EQ(testing::oracle_cut(c.coarse, coarse_assignment), testing::oracle_cut(g, lifted));
  }
}

TEST(CanonicalEdgeList, RoundTripsThroughLoader) {
  const SignedGraph g = SignedGraph::from_edges(5, {{0, 1, 1.0}, {1, 3, -1.0}});
  std::ostringstream out;
  write_canonical_edge_list(out, g);
  EXPECT_NE(out.str().find("# n=5 m_plus=1 m_minus=1 sum_neg=-1"), std::string::npos);
  std::istringstream in(out.str());
  EdgeList list = load_edge_list(in);
  const SignedGraph back = normalize(list.records, list.n);
  EXPECT_EQ(back.n(), 5u);
  EXPECT_EQ(back.edges(), g.edges());
}

} // namespace
} // namespace scml
