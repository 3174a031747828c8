#include <gtest/gtest.h>

#include <sstream>

#include "khop/error.hpp"
#include "khop/network.hpp"

using namespace khop;

namespace {

Graph parse(const std::string& text, double p = 0.5, ThetaMode theta = ThetaConstant{1.0}, std::uint64_t seed = 1) {
  std::istringstream in(text);
  return read_graph(in, "mem", p, theta, seed);
}

CommunityStructure communities(const Graph& g, const std::string& text) {
  std::istringstream in(text);
  return read_communities(in, "mem", g);
}

std::vector<std::string> labels(const Graph& g, std::span<const NodeId> ids) {
  std::vector<std::string> out;
  for (NodeId u : ids) out.push_back(g.label(u));
  return out;
}

}  // namespace

TEST(LoadGraph, ThreeLinePath) {
  const Graph g = parse("a b\nb c\nc d\n");
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edge_count(), 3u);
  for (EdgeId e = 0; e < g.edge_count(); ++e) EXPECT_DOUBLE_EQ(g.edge_prob(e), 0.5);
  for (NodeId u = 0; u < g.node_count(); ++u) EXPECT_DOUBLE_EQ(g.accept_prob(u), 1.0);
}

TEST(LoadGraph, EmptyInput) {
  const Graph g = parse("");
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(LoadGraph, CommentsBlankLinesAndExplicitProbabilities) {
  const Graph g = parse("# header\n% other\n\n  a b 0.25\nb c\n");
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(g.edge_prob(0), 0.25);
  EXPECT_DOUBLE_EQ(g.edge_prob(1), 0.5);
}

TEST(LoadGraph, LabelsMapInOrderOfAppearance) {
  const Graph g = parse("x y\nz x\n");
  EXPECT_EQ(g.id_of("x"), 0u);
  EXPECT_EQ(g.id_of("y"), 1u);
  EXPECT_EQ(g.id_of("z"), 2u);
  std::ostringstream map;
  g.write_node_map(map);
  EXPECT_EQ(map.str(), "0 x\n1 y\n2 z\n");
}

TEST(LoadGraph, MalformedLineReportsLineNumber) {
  try {
    parse("a b\nb\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("a b c d\n"), ParseError);
  EXPECT_THROW(parse("a b x\n"), ParseError);
}

TEST(LoadGraph, RejectsBadProbabilityDuplicateAndSelfLoop) {
  EXPECT_THROW(parse("a b 1.5\n"), ValidationError);
  EXPECT_THROW(parse("a b -0.1\n"), ValidationError);
  EXPECT_THROW(parse("a b\nb a\n"), ValidationError);
  EXPECT_THROW(parse("a b\na b\n"), ValidationError);
  EXPECT_THROW(parse("a a\n"), ValidationError);
}

TEST(LoadGraph, MissingFileIsIoError) {
  EXPECT_THROW(load_graph("/nonexistent/graph.txt", 0.5, ThetaUniform{}, 1), IoError);
}

TEST(LoadGraph, UniformThetaIsSeededAndInRange) {
  const std::string text = "a b\nb c\nc d\nd e\n";
  const Graph g1 = parse(text, 0.5, ThetaUniform{}, 42);
  const Graph g2 = parse(text, 0.5, ThetaUniform{}, 42);
  const Graph g3 = parse(text, 0.5, ThetaUniform{}, 43);
  bool differs = false;
  for (NodeId u = 0; u < g1.node_count(); ++u) {
    EXPECT_EQ(g1.accept_prob(u), g2.accept_prob(u));
    EXPECT_GE(g1.accept_prob(u), 0.0);
    EXPECT_LE(g1.accept_prob(u), 1.0);
    differs |= g1.accept_prob(u) != g3.accept_prob(u);
  }
  EXPECT_TRUE(differs);
}

TEST(ThetaMode, Parsing) {
  EXPECT_TRUE(std::holds_alternative<ThetaUniform>(parse_theta_mode("uniform")));
  const auto c = parse_theta_mode("const:0.25");
  ASSERT_TRUE(std::holds_alternative<ThetaConstant>(c));
  EXPECT_DOUBLE_EQ(std::get<ThetaConstant>(c).value, 0.25);
  EXPECT_TRUE(std::holds_alternative<ThetaFile>(parse_theta_mode("file:x.txt")));
  EXPECT_THROW(parse_theta_mode("const:2"), ValidationError);
  EXPECT_THROW(parse_theta_mode("gaussian"), ValidationError);
}

TEST(Builder, WithEdgeAndAcceptProbs) {
  GraphBuilder b;
  b.add_edge("a", "b", 0.3);
  const Graph g = b.build().with_edge_probs(0.9);
  EXPECT_DOUBLE_EQ(g.edge_prob(0), 0.9);
  EXPECT_THROW(g.with_edge_probs(1.1), ValidationError);
  const Graph h = g.with_accept_probs({0.2, 0.4});
  EXPECT_DOUBLE_EQ(h.accept_prob(1), 0.4);
  EXPECT_THROW(g.with_accept_probs({0.2}), ValidationError);
}

TEST(Communities, TwoEqualCommunities) {
  const Graph g = parse("a b\nb c\nc d\n");
  const auto cs = communities(g, "a 1\nb 1\nc 2\nd 2\n");
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(labels(g, cs.members(0)), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(labels(g, cs.members(1)), (std::vector<std::string>{"c", "d"}));
}

TEST(Communities, SingleLabelIsOneCommunity) {
  const Graph g = parse("a b\nb c\nc d\n");
  const auto cs = communities(g, "a x\nb x\nc x\nd x\n");
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs.members(0).size(), 4u);
}

TEST(Communities, OrderedBySizeDescending) {
  const Graph g = parse("a b\nb c\nc d\n");
  const auto cs = communities(g, "a 1\nb 2\nc 2\nd 2\n");
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(labels(g, cs.members(0)), (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_EQ(labels(g, cs.members(1)), (std::vector<std::string>{"a"}));
  EXPECT_EQ(cs.community_of(g.id_of("a")), 1u);
}

TEST(Communities, NumericLabelTieBreak) {
  const Graph g = parse("a b\nc d\ne f\n");
  const auto cs = communities(g, "a 10\nb 10\nc 9\nd 9\ne 2\nf 2\n");
  EXPECT_EQ(cs.label(0), "2");
  EXPECT_EQ(cs.label(1), "9");
  EXPECT_EQ(cs.label(2), "10");
}

TEST(Communities, Errors) {
  const Graph g = parse("a b\nb c\n");
  EXPECT_THROW(communities(g, "a 1\nb 1\n"), ValidationError);
  EXPECT_THROW(communities(g, "a 1\nb 1\nc 1\nz 1\n"), ValidationError);
  EXPECT_THROW(communities(g, "a 1\nb 1\nc 1\na 2\n"), ValidationError);
  EXPECT_THROW(communities(g, "a\n"), ParseError);
}

TEST(Communities, DirectConstructionValidatesPartition) {
  const Graph g = parse("a b\nb c\n");
  EXPECT_THROW(CommunityStructure(g, {{0, 1}, {}}), ValidationError);
  EXPECT_THROW(CommunityStructure(g, {{0, 1}, {1, 2}}), ValidationError);
  EXPECT_THROW(CommunityStructure(g, {{0, 1}}), ValidationError);
  EXPECT_NO_THROW(CommunityStructure(g, {{0, 1}, {2}}));
  EXPECT_EQ(CommunityStructure::single(g).size(), 1u);
}

TEST(Neighbors, Examples) {
  EXPECT_EQ(labels(parse("a b\nb c\n"), neighbors(parse("a b\nb c\n"), "b")),
            (std::vector<std::string>{"a", "c"}));
  GraphBuilder b;
  b.node("lonely");
  EXPECT_TRUE(neighbors(b.build(), "lonely").empty());
  const Graph star = parse("h x\nh y\nh z\n");
  EXPECT_EQ(neighbors(star, "h").size(), 3u);
  EXPECT_THROW(neighbors(star, "nope"), LookupError);
  EXPECT_THROW(neighbors(star, NodeId{17}), LookupError);
}

TEST(GraphStats, Examples) {
  const auto path = graph_stats(parse("a b\nb c\nc d\n"));
  EXPECT_EQ(path.nodes, 4u);
  EXPECT_EQ(path.edges, 3u);
  EXPECT_DOUBLE_EQ(path.average_degree, 1.5);
  const auto k4 = graph_stats(parse("a b\na c\na d\nb c\nb d\nc d\n"));
  EXPECT_DOUBLE_EQ(k4.average_degree, 3.0);
  EXPECT_DOUBLE_EQ(graph_stats(Graph{}).average_degree, 0.0);
}

TEST(GameParams, Validation) {
  EXPECT_NO_THROW(GameParams::make(2, {8, 6, 4}));
  EXPECT_NO_THROW(GameParams::make(0, {8}));
  EXPECT_THROW(GameParams::make(2, {8, 6}), ValidationError);
  EXPECT_THROW(GameParams::make(1, {6, 8}), ValidationError);
  EXPECT_THROW(GameParams::make(1, {8, 0}), ValidationError);
  EXPECT_THROW(GameParams::make(-1, {}), ValidationError);
}

TEST(Bfs, TruncatedDistances) {
  const Graph g = parse("a b\nb c\nc d\n");
  const auto d = bfs_distances(g, g.id_of("a"), 2);
  EXPECT_EQ(d, (std::vector<int>{0, 1, 2, -1}));
}
