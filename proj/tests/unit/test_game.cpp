#include <gtest/gtest.h>

#include <sstream>

#include "khop/error.hpp"
#include "khop/game.hpp"
#include "oracle.hpp"

using namespace khop;

namespace {

// Path a-b-c-d as nodes 0..3, edges 0:(a,b) 1:(b,c) 2:(c,d).
Graph path4(double p = 0.5, double theta = 1.0) { return oracle::make_graph(4, {{0, 1}, {1, 2}, {2, 3}}, p, theta); }

std::vector<int> hop_vector(const HopAssignment& h) { return h.hop; }

}  // namespace

TEST(AssignHops, SingleSourcePath) {
  const Graph g = path4();
  PartialRealization psi(g);
  psi.record_invitation(0, true);
  psi.set_edge(0, TriState::One);
  psi.set_edge(1, TriState::One);
  EXPECT_EQ(hop_vector(assign_hops(g, psi, 2)), (std::vector<int>{0, 1, 2, -1}));
}

TEST(AssignHops, UpgradeToInitiator) {
  const Graph g = path4();
  PartialRealization psi(g);
  psi.record_invitation(0, true);
  psi.set_edge(0, TriState::One);
  psi.set_edge(1, TriState::One);
  psi.record_invitation(2, true);
  psi.set_edge(2, TriState::One);
  const auto hops = assign_hops(g, psi, 2);
  EXPECT_EQ(hop_vector(hops), (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(revenue(hops, GameParams::make(2, {8, 6, 4})), 28);
}

TEST(AssignHops, NoInitiators) {
  const Graph g = path4();
  PartialRealization psi(g);
  psi.record_invitation(1, false);
  psi.set_edge(0, TriState::One);
  const auto hops = assign_hops(g, psi, 2);
  EXPECT_EQ(hops.participant_count(), 0u);
  EXPECT_EQ(revenue(hops, GameParams::make(2, {8, 6, 4})), 0);
}

TEST(Revenue, Examples) {
  const auto params = GameParams::make(2, {8, 6, 4});
  EXPECT_EQ(revenue(HopAssignment{{0, 1, 2}}, params), 18);
  EXPECT_EQ(revenue(HopAssignment{{0, 1, 0, 1}}, params), 28);
  EXPECT_EQ(revenue(HopAssignment{{-1, -1}}, params), 0);
  EXPECT_THROW(revenue(HopAssignment{{3}}, params), ContractViolation);
}

TEST(SimulateInvitation, IsolatedNodeAccepts) {
  GraphBuilder b;
  b.node("u", 1.0);
  const Graph g = b.build();
  Rng rng(1);
  const auto params = GameParams::make(0, {8});
  const auto out = simulate_invitation(g, PartialRealization(g), 0, params, rng);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.psi.user_state(0), TriState::One);
  EXPECT_EQ(current_revenue(g, out.psi, params), 8);
}

TEST(SimulateInvitation, ZeroThetaRejects) {
  const Graph g = path4(0.5, 0.0);
  Rng rng(1);
  const auto out = simulate_invitation(g, PartialRealization(g), 1, GameParams::make(1, {8, 6}), rng);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(out.psi.user_state(1), TriState::Zero);
  EXPECT_EQ(out.psi.observed_edge_count(), 0u);
  EXPECT_EQ(out.psi.observed_user_count(), 1u);
}

TEST(SimulateInvitation, DeterministicEdge) {
  const Graph g = oracle::make_graph(2, {{0, 1}}, 1.0, 1.0);
  Rng rng(9);
  const auto params = GameParams::make(1, {8, 6});
  const auto out = simulate_invitation(g, PartialRealization(g), 0, params, rng);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.psi.edge_state(0), TriState::One);
  EXPECT_EQ(hop_vector(assign_hops(g, out.psi, 1)), (std::vector<int>{0, 1}));
}

TEST(SimulateInvitation, OnlySamplesWithinKMinusOneHops) {
  // Path of 4 with p=1, k=1 from node 0: only edge (0,1) is observed.
  const Graph g = path4(1.0);
  Rng rng(3);
  const auto out = simulate_invitation(g, PartialRealization(g), 0, GameParams::make(1, {8, 6}), rng);
  EXPECT_EQ(out.psi.edge_state(0), TriState::One);
  EXPECT_EQ(out.psi.edge_state(1), TriState::Unknown);
  EXPECT_EQ(out.psi.edge_state(2), TriState::Unknown);
}

TEST(SimulateInvitation, EdgeBetweenTwoKHopParticipantsIsNotSampled) {
  // Triangle 0-1-2 with p=1 and k=1: 1 and 2 are both 1-hop, edge (1,2) stays unknown.
  const Graph g = oracle::make_graph(3, {{0, 1}, {0, 2}, {1, 2}}, 1.0, 1.0);
  Rng rng(3);
  const auto out = simulate_invitation(g, PartialRealization(g), 0, GameParams::make(1, {8, 6}), rng);
  EXPECT_EQ(out.psi.edge_state(2), TriState::Unknown);
}

TEST(SimulateInvitation, ReinviteIsContractViolation) {
  const Graph g = path4();
  Rng rng(1);
  const auto params = GameParams::make(1, {8, 6});
  const auto out = simulate_invitation(g, PartialRealization(g), 0, params, rng);
  EXPECT_THROW(simulate_invitation(g, out.psi, 0, params, rng), ContractViolation);
}

TEST(SimulateInvitation, SameSeedSameOutcome) {
  const Graph g = oracle::make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 3}}, 0.5, 0.7);
  const auto params = GameParams::make(2, {8, 6, 4});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r1(seed), r2(seed);
    const auto a = simulate_invitation(g, PartialRealization(g), 1, params, r1);
    const auto b = simulate_invitation(g, PartialRealization(g), 1, params, r2);
    EXPECT_EQ(a.psi, b.psi);
    EXPECT_EQ(a.accepted, b.accepted);
  }
}

TEST(CurrentRevenue, Examples) {
  const auto params = GameParams::make(2, {8, 6, 4});
  const Graph g = oracle::make_graph(3, {{0, 1}, {1, 2}}, 0.5, 1.0);
  PartialRealization psi(g);
  EXPECT_EQ(current_revenue(g, psi, params), 0);
  psi.record_invitation(0, true);
  psi.set_edge(0, TriState::One);
  psi.set_edge(1, TriState::Zero);
  EXPECT_EQ(current_revenue(g, psi, params), 14);
}

TEST(PartialRealization, StatesArePermanent) {
  const Graph g = path4();
  PartialRealization psi(g);
  psi.set_edge(0, TriState::One);
  EXPECT_NO_THROW(psi.set_edge(0, TriState::One));
  EXPECT_THROW(psi.set_edge(0, TriState::Zero), ContractViolation);
  EXPECT_THROW(psi.set_edge(0, TriState::Unknown), ContractViolation);
  psi.record_invitation(2, false);
  EXPECT_THROW(psi.record_invitation(2, true), ContractViolation);
  EXPECT_EQ(psi.invited().size(), 1u);
}

TEST(PartialRealization, Subrealization) {
  const Graph g = path4();
  PartialRealization a(g);
  a.record_invitation(0, true);
  PartialRealization b = a;
  b.set_edge(0, TriState::One);
  EXPECT_TRUE(is_subrealization(a, b));
  EXPECT_FALSE(is_subrealization(b, a));
  EXPECT_TRUE(is_subrealization(a, a));
  PartialRealization c(g);
  c.record_invitation(0, false);
  EXPECT_FALSE(is_subrealization(a, c));
}

TEST(PolicyTrace, RejectsDuplicates) {
  PolicyTrace t;
  t.append(3, true);
  t.append(1, false);
  EXPECT_TRUE(t.contains(1));
  EXPECT_FALSE(t.contains(2));
  EXPECT_THROW(t.append(3, false), ContractViolation);
  EXPECT_EQ(t.invited(), (std::vector<NodeId>{3, 1}));
}

TEST(RealizationDump, RoundTrip) {
  const Graph g = oracle::make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}, 0.5, 0.6);
  const auto params = GameParams::make(2, {8, 6, 4});
  Rng rng(11);
  PartialRealization psi(g);
  for (NodeId u : {3u, 0u, 1u}) psi = simulate_invitation(g, psi, u, params, rng).psi;
  const std::string text = dump_realization(g, psi);
  std::istringstream in(text);
  const auto back = read_realization(in, "mem", g);
  EXPECT_EQ(back, psi);
  EXPECT_EQ(dump_realization(g, back), text);
}

TEST(RealizationDump, Format) {
  const Graph g = oracle::make_graph(2, {{0, 1}}, 0.5, 1.0);
  PartialRealization psi(g);
  psi.record_invitation(1, true);
  psi.set_edge(0, TriState::Zero);
  EXPECT_EQ(dump_realization(g, psi), "U 1 1\nE 0 1 0\n");
}

TEST(RealizationDump, ParseErrors) {
  const Graph g = oracle::make_graph(3, {{0, 1}}, 0.5, 1.0);
  auto read = [&](const std::string& s) {
    std::istringstream in(s);
    return read_realization(in, "mem", g);
  };
  EXPECT_THROW(read("X 0 1\n"), ParseError);
  EXPECT_THROW(read("U 9 1\n"), ParseError);
  EXPECT_THROW(read("E 0 2 1\n"), ParseError);
  EXPECT_THROW(read("U 0 2\n"), ParseError);
  EXPECT_THROW(read("U 0 1\nU 0 1\n"), ParseError);
  EXPECT_NO_THROW(read("# comment\n\nU 0 1\nE 1 0 1\n"));
}
