#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "khop/network.hpp"
#include "khop/rng.hpp"

namespace khop {

/// Observation state of a user or an edge. Zero and One are terminal.
enum class TriState : std::uint8_t { Unknown, Zero, One };

/// Observations so far: user states, edge states and the invitation order.
///
/// Sized for one Graph. Setters enforce permanence: a determined state can
/// never change, and only invited users carry a user state.
class PartialRealization {
 public:
  PartialRealization() = default;
  explicit PartialRealization(const Graph& graph);

  std::size_t node_count() const noexcept { return user_state_.size(); }
  std::size_t edge_count() const noexcept { return edge_state_.size(); }

  TriState user_state(NodeId u) const { return user_state_.at(u); }
  TriState edge_state(EdgeId e) const { return edge_state_.at(e); }
  std::span<const TriState> edge_states() const noexcept { return edge_state_; }
  std::span<const NodeId> invited() const noexcept { return invited_; }
  bool is_invited(NodeId u) const { return user_state_.at(u) != TriState::Unknown; }

  /// Records u's answer to an invitation. Throws ContractViolation if u was
  /// already invited.
  void record_invitation(NodeId u, bool accepted);
  /// Sets an Unknown edge. Setting the same value again is a no-op; a
  /// conflicting value throws ContractViolation.
  void set_edge(EdgeId e, TriState state);

  /// dx(psi) size and dy(psi) size.
  std::size_t observed_user_count() const noexcept { return invited_.size(); }
  std::size_t observed_edge_count() const noexcept;

  friend bool operator==(const PartialRealization&, const PartialRealization&) = default;

 private:
  std::vector<TriState> user_state_;
  std::vector<TriState> edge_state_;
  std::vector<NodeId> invited_;
};

/// True when every determined state in `sub` holds the same value in `super`
/// (psi is a subrealization of psi').
bool is_subrealization(const PartialRealization& sub, const PartialRealization& super);

/// Minimum hop of every participant; kNoHop for non-participants.
struct HopAssignment {
  static constexpr int kNoHop = -1;
  std::vector<int> hop;

  bool participates(NodeId u) const { return hop.at(u) != kNoHop; }
  std::size_t participant_count() const;
};

/// Ordered invitation log of a policy run.
struct PolicyTrace {
  struct Entry {
    NodeId node;
    bool accepted;
  };
  std::vector<Entry> entries;

  /// Throws ContractViolation if u is already in the trace.
  void append(NodeId u, bool accepted);
  bool contains(NodeId u) const;
  std::vector<NodeId> invited() const;
};

/// Multi-source BFS from every accepted initiator over One edges, depth <= k.
HopAssignment assign_hops(const Graph& graph, const PartialRealization& psi, int k);

/// Sum of R_hop over participants. Throws ContractViolation for hop > k.
Revenue revenue(const HopAssignment& hops, const GameParams& params);

/// Revenue determined by psi.
Revenue current_revenue(const Graph& graph, const PartialRealization& psi, const GameParams& params);

struct InvitationOutcome {
  PartialRealization psi;
  bool accepted = false;
};

/// Invites u: samples acceptance with theta_u, and on acceptance runs the
/// k-round cascade, sampling each Unknown edge the first time it is
/// observed. Throws ContractViolation if u was already invited.
InvitationOutcome simulate_invitation(const Graph& graph, const PartialRealization& psi, NodeId u,
                                      const GameParams& params, Rng& rng);

/// Line-oriented dump: `U <node> <0|1>` in invitation order, then
/// `E <u> <v> <0|1>` in edge order.
void write_realization(std::ostream& out, const Graph& graph, const PartialRealization& psi);
std::string dump_realization(const Graph& graph, const PartialRealization& psi);
PartialRealization read_realization(std::istream& in, const std::string& source, const Graph& graph);
PartialRealization load_realization(const std::string& path, const Graph& graph);

}  // namespace khop
