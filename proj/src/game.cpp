#include "khop/game.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "khop/cascade.hpp"
#include "khop/error.hpp"

namespace khop {

PartialRealization::PartialRealization(const Graph& graph)
    : user_state_(graph.node_count(), TriState::Unknown),
      edge_state_(graph.edge_count(), TriState::Unknown) {}

void PartialRealization::record_invitation(NodeId u, bool accepted) {
  TriState& s = user_state_.at(u);
  if (s != TriState::Unknown) {
    throw ContractViolation("node " + std::to_string(u) + " was already invited");
  }
  s = accepted ? TriState::One : TriState::Zero;
  invited_.push_back(u);
}

void PartialRealization::set_edge(EdgeId e, TriState state) {
  TriState& s = edge_state_.at(e);
  if (state == TriState::Unknown) {
    if (s != TriState::Unknown) throw ContractViolation("cannot revert an observed edge");
    return;
  }
  if (s != TriState::Unknown && s != state) {
    throw ContractViolation("edge " + std::to_string(e) + " already observed with another state");
  }
  s = state;
}

std::size_t PartialRealization::observed_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edge_state_.begin(), edge_state_.end(),
                    [](TriState s) { return s != TriState::Unknown; }));
}

bool is_subrealization(const PartialRealization& sub, const PartialRealization& super) {
  if (sub.node_count() != super.node_count() || sub.edge_count() != super.edge_count()) {
    return false;
  }
  for (NodeId u = 0; u < sub.node_count(); ++u) {
    if (sub.user_state(u) != TriState::Unknown && sub.user_state(u) != super.user_state(u)) {
      return false;
    }
  }
  for (EdgeId e = 0; e < sub.edge_count(); ++e) {
    if (sub.edge_state(e) != TriState::Unknown && sub.edge_state(e) != super.edge_state(e)) {
      return false;
    }
  }
  return true;
}

std::size_t HopAssignment::participant_count() const {
  return static_cast<std::size_t>(
      std::count_if(hop.begin(), hop.end(), [](int h) { return h != kNoHop; }));
}

void PolicyTrace::append(NodeId u, bool accepted) {
  if (contains(u)) throw ContractViolation("node " + std::to_string(u) + " invited twice");
  entries.push_back({u, accepted});
}

bool PolicyTrace::contains(NodeId u) const {
  return std::any_of(entries.begin(), entries.end(), [u](const Entry& e) { return e.node == u; });
}

std::vector<NodeId> PolicyTrace::invited() const {
  std::vector<NodeId> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.node);
  return out;
}

HopAssignment assign_hops(const Graph& graph, const PartialRealization& psi, int k) {
  HopAssignment out;
  out.hop.assign(graph.node_count(), HopAssignment::kNoHop);
  std::vector<NodeId> queue;
  for (NodeId u : psi.invited()) {
    if (psi.user_state(u) == TriState::One) {
      out.hop[u] = 0;
      queue.push_back(u);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId x = queue[head];
    const int d = out.hop[x];
    if (d >= k) continue;
    for (const auto& a : graph.adjacency(x)) {
      if (psi.edge_state(a.edge) == TriState::One && out.hop[a.node] == HopAssignment::kNoHop) {
        out.hop[a.node] = d + 1;
        queue.push_back(a.node);
      }
    }
  }
  return out;
}

Revenue revenue(const HopAssignment& hops, const GameParams& params) {
  Revenue total = 0;
  for (int h : hops.hop) {
    if (h == HopAssignment::kNoHop) continue;
    if (h < 0 || h > params.k) {
      throw ContractViolation("hop " + std::to_string(h) + " outside [0," + std::to_string(params.k) + "]");
    }
    total += params.at(h);
  }
  return total;
}

Revenue current_revenue(const Graph& graph, const PartialRealization& psi, const GameParams& params) {
  return revenue(assign_hops(graph, psi, params.k), params);
}

InvitationOutcome simulate_invitation(const Graph& graph, const PartialRealization& psi, NodeId u,
                                      const GameParams& params, Rng& rng) {
  if (psi.is_invited(u)) {
    throw ContractViolation("node '" + graph.label(u) + "' was already invited");
  }
  InvitationOutcome out{psi, false};
  out.accepted = rng.bernoulli(graph.accept_prob(u));
  out.psi.record_invitation(u, out.accepted);
  if (!out.accepted) return out;

  CascadeWorkspace ws(graph, params);
  ws.load(psi);
  ws.accept(u, [&](EdgeId e) { return rng.bernoulli(graph.edge_prob(e)); });
  for (EdgeId e : ws.touched_edges()) out.psi.set_edge(e, ws.edge_states()[e]);
  return out;
}

// --- Text dump ------------------------------------------------------------

void write_realization(std::ostream& out, const Graph& graph, const PartialRealization& psi) {
  for (NodeId u : psi.invited()) {
    out << "U " << graph.label(u) << ' ' << (psi.user_state(u) == TriState::One ? 1 : 0) << '\n';
  }
  for (EdgeId e = 0; e < psi.edge_count(); ++e) {
    const TriState s = psi.edge_state(e);
    if (s == TriState::Unknown) continue;
    auto [u, v] = graph.endpoints(e);
    out << "E " << graph.label(u) << ' ' << graph.label(v) << ' ' << (s == TriState::One ? 1 : 0)
        << '\n';
  }
}

std::string dump_realization(const Graph& graph, const PartialRealization& psi) {
  std::ostringstream out;
  write_realization(out, graph, psi);
  return out.str();
}

PartialRealization read_realization(std::istream& in, const std::string& source, const Graph& graph) {
  PartialRealization psi(graph);
  std::string line;
  std::size_t line_no = 0;
  auto state_of = [&](const std::string& token) {
    if (token == "0") return false;
    if (token == "1") return true;
    throw ParseError(source, line_no, "state must be 0 or 1, got '" + token + "'");
  };
  auto lookup = [&](const std::string& label) {
    if (!graph.contains(label)) throw ParseError(source, line_no, "unknown node '" + label + "'");
    return graph.id_of(label);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag.front() == '#') continue;
    std::vector<std::string> rest;
    for (std::string t; fields >> t;) rest.push_back(t);
    try {
      if (tag == "U" && rest.size() == 2) {
        psi.record_invitation(lookup(rest[0]), state_of(rest[1]));
      } else if (tag == "E" && rest.size() == 3) {
        const auto e = graph.find_edge(lookup(rest[0]), lookup(rest[1]));
        if (e < 0) throw ParseError(source, line_no, "no edge " + rest[0] + " " + rest[1]);
        const auto id = static_cast<EdgeId>(e);
        if (psi.edge_state(id) != TriState::Unknown) {
          throw ParseError(source, line_no, "edge listed twice");
        }
        psi.set_edge(id, state_of(rest[2]) ? TriState::One : TriState::Zero);
      } else {
        throw ParseError(source, line_no, "expected 'U <node> <0|1>' or 'E <u> <v> <0|1>'");
      }
    } catch (const ContractViolation& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return psi;
}

PartialRealization load_realization(const std::string& path, const Graph& graph) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_realization(in, path, graph);
}

}  // namespace khop
