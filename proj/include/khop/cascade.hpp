#pragma once

#include <span>
#include <utility>
#include <vector>

#include "khop/game.hpp"

namespace khop {

/// Mutable copy of a partial realization's edge states and hop assignment
/// on which accepted invitations can be played out and undone.
///
/// accept() runs the cascade of a new initiator in BFS order: a node at hop
/// d < k samples each of its Unknown edges (One with probability p_e) and
/// passes hop d+1 to neighbors over One edges whose hop it improves. Nodes
/// at hop k never sample. Only nodes whose hop improved are expanded; every
/// other participant below hop k already has all incident edges observed.
///
/// Edges with p_e in (0,1) are resolved by the caller's sampler, so the same
/// routine backs simulation (random sampler) and exact enumeration
/// (replayed decisions).
class CascadeWorkspace {
 public:
  CascadeWorkspace(const Graph& graph, const GameParams& params);

  void load(const PartialRealization& psi);
  void load(const PartialRealization& psi, const HopAssignment& hops);

  /// Plays out u becoming an initiator and returns the revenue gained.
  /// `sample(EdgeId) -> bool` is called once per Unknown edge with
  /// 0 < p_e < 1 that the cascade observes, in observation order.
  template <class Sampler>
  Revenue accept(NodeId u, Sampler&& sample);

  /// Undoes every change since the last load() or commit().
  void rollback();
  /// Keeps the changes; rollback() afterwards returns to this point.
  void commit();

  std::span<const TriState> edge_states() const noexcept { return edge_state_; }
  std::span<const int> hops() const noexcept { return hop_; }
  /// Edges resolved since the last load()/commit(), in observation order.
  std::span<const EdgeId> touched_edges() const noexcept { return edge_log_; }

 private:
  Revenue improve(NodeId v, int hop);

  const Graph* graph_;
  const GameParams* params_;
  std::vector<TriState> edge_state_;
  std::vector<int> hop_;
  std::vector<EdgeId> edge_log_;
  std::vector<std::pair<NodeId, int>> hop_log_;
  std::vector<NodeId> queue_;
};

template <class Sampler>
Revenue CascadeWorkspace::accept(NodeId u, Sampler&& sample) {
  const int k = params_->k;
  queue_.clear();
  Revenue gain = improve(u, 0);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const NodeId x = queue_[head];
    const int d = hop_[x];
    if (d >= k) continue;
    for (const auto& a : graph_->adjacency(x)) {
      TriState& state = edge_state_[a.edge];
      if (state == TriState::Unknown) {
        const double p = graph_->edge_prob(a.edge);
        bool live;
        if (p >= 1.0) {
          live = true;
        } else if (p <= 0.0) {
          live = false;
        } else {
          live = sample(a.edge);
        }
        state = live ? TriState::One : TriState::Zero;
        edge_log_.push_back(a.edge);
      }
      if (state == TriState::One) {
        const int current = hop_[a.node];
        if (current == HopAssignment::kNoHop || current > d + 1) gain += improve(a.node, d + 1);
      }
    }
  }
  return gain;
}

}  // namespace khop
