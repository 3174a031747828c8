#include "khop/cascade.hpp"

namespace khop {

CascadeWorkspace::CascadeWorkspace(const Graph& graph, const GameParams& params)
    : graph_(&graph), params_(&params) {}

void CascadeWorkspace::load(const PartialRealization& psi) {
  load(psi, assign_hops(*graph_, psi, params_->k));
}

void CascadeWorkspace::load(const PartialRealization& psi, const HopAssignment& hops) {
  edge_state_.assign(psi.edge_states().begin(), psi.edge_states().end());
  hop_ = hops.hop;
  edge_log_.clear();
  hop_log_.clear();
}

Revenue CascadeWorkspace::improve(NodeId v, int hop) {
  const int old = hop_[v];
  hop_log_.emplace_back(v, old);
  hop_[v] = hop;
  queue_.push_back(v);
  return params_->at(hop) - (old == HopAssignment::kNoHop ? 0 : params_->at(old));
}

void CascadeWorkspace::rollback() {
  for (EdgeId e : edge_log_) edge_state_[e] = TriState::Unknown;
  for (auto it = hop_log_.rbegin(); it != hop_log_.rend(); ++it) hop_[it->first] = it->second;
  edge_log_.clear();
  hop_log_.clear();
}

void CascadeWorkspace::commit() {
  edge_log_.clear();
  hop_log_.clear();
}

}  // namespace khop
