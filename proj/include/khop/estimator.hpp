#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "khop/game.hpp"
#include "khop/network.hpp"
#include "khop/rng.hpp"

namespace khop {

enum class EstimateMethod { Exact, MonteCarlo, Heuristic };

std::string_view to_string(EstimateMethod m);

/// Conditional expected marginal benefit Delta(u|psi) in revenue units.
struct MarginalEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateMethod method = EstimateMethod::Exact;
  std::size_t samples = 0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 22;
inline constexpr std::size_t kDefaultMonteCarloSamples = 10000;

/// Everything an estimator reads; hops must equal assign_hops(graph, psi, k).
struct EstimationContext {
  const Graph& graph;
  const PartialRealization& psi;
  const HopAssignment& hops;
  const GameParams& params;
};

/// Number of Unknown edges with 0 < p_e < 1 that u's cascade could observe:
/// those incident to nodes within k-1 hops of u in the full graph.
std::size_t branching_edge_count(const Graph& graph, const PartialRealization& psi, NodeId u, int k);

/// Calls fn(next_psi, probability, accepted) once per distinct outcome of
/// inviting u from psi (the rejection first, then every cascade outcome).
/// Probabilities sum to one. Throws EnumerationTooLarge past `cap`.
void for_each_invitation_outcome(
    const Graph& graph, const PartialRealization& psi, NodeId u, const GameParams& params,
    const std::function<void(const PartialRealization&, double, bool)>& fn,
    std::size_t cap = kDefaultEnumerationCap);

/// Exact Delta(u|psi) by enumerating the cascade round by round: only edges
/// the cascade actually observes contribute probability factors.
MarginalEstimate exact_marginal(const EstimationContext& ctx, NodeId u,
                                std::size_t cap = kDefaultEnumerationCap);
MarginalEstimate exact_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                                const GameParams& params, std::size_t cap = kDefaultEnumerationCap);

/// Sample mean of the revenue increment over n_samples simulated invitations.
MarginalEstimate mc_marginal(const EstimationContext& ctx, NodeId u, std::size_t n_samples, Rng& rng);
MarginalEstimate mc_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                             const GameParams& params, std::size_t n_samples, Rng& rng);

/// Layered approximation. Layers S_0..S_k come from a BFS from u over
/// non-Zero edges that only passes through nodes whose hop would improve;
/// a node in S_i joins with probability 1 - prod_w (1 - P(w) * p_wv) over
/// its S_{i-1} neighbors w, as if those events were independent. Exact
/// when k <= 1 or every relevant non-Zero edge has p = 1.
MarginalEstimate heuristic_marginal(const EstimationContext& ctx, NodeId u);
MarginalEstimate heuristic_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                                    const GameParams& params);

/// Nodes within graph distance 2k of u_last (ignoring states), sorted.
/// These are the only nodes whose Delta can change when u_last accepts.
std::vector<NodeId> invalidation_set(const Graph& graph, NodeId u_last, int k);

/// Marginal-benefit strategy injected into the policies. Implementations are
/// stateless; `stream_seed` seeds any randomness the estimate needs.
class MarginalEstimator {
 public:
  virtual ~MarginalEstimator() = default;
  virtual MarginalEstimate estimate(const EstimationContext& ctx, NodeId u,
                                    std::uint64_t stream_seed) const = 0;
  /// `exact`, `mc:<n>` or `heuristic`.
  virtual std::string name() const = 0;
};

class ExactEstimator final : public MarginalEstimator {
 public:
  explicit ExactEstimator(std::size_t cap = kDefaultEnumerationCap) : cap_(cap) {}
  MarginalEstimate estimate(const EstimationContext& ctx, NodeId u, std::uint64_t) const override {
    return exact_marginal(ctx, u, cap_);
  }
  std::string name() const override { return "exact"; }

 private:
  std::size_t cap_;
};

class MonteCarloEstimator final : public MarginalEstimator {
 public:
  explicit MonteCarloEstimator(std::size_t samples = kDefaultMonteCarloSamples);
  MarginalEstimate estimate(const EstimationContext& ctx, NodeId u,
                            std::uint64_t stream_seed) const override {
    Rng rng(stream_seed);
    return mc_marginal(ctx, u, samples_, rng);
  }
  std::string name() const override { return "mc:" + std::to_string(samples_); }

 private:
  std::size_t samples_;
};

class HeuristicEstimator final : public MarginalEstimator {
 public:
  MarginalEstimate estimate(const EstimationContext& ctx, NodeId u, std::uint64_t) const override {
    return heuristic_marginal(ctx, u);
  }
  std::string name() const override { return "heuristic"; }
};

/// Parses `exact`, `mc`, `mc:<n>` or `heuristic`.
std::unique_ptr<MarginalEstimator> make_estimator(std::string_view spec);

}  // namespace khop
