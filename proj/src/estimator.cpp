#include "khop/estimator.hpp"

#include <charconv>
#include <cmath>

#include "khop/cascade.hpp"
#include "khop/error.hpp"

namespace khop {
namespace {

Revenue hop_revenue(const GameParams& params, int hop) {
  return hop == HopAssignment::kNoHop ? 0 : params.at(hop);
}

void require_uninvited(const Graph& graph, const PartialRealization& psi, NodeId u) {
  if (psi.is_invited(u)) {
    throw ContractViolation("node '" + graph.label(u) + "' was already invited");
  }
}

void require_enumerable(const Graph& graph, const PartialRealization& psi, NodeId u, int k,
                        std::size_t cap) {
  const std::size_t count = branching_edge_count(graph, psi, u, k);
  if (count > cap) {
    throw EnumerationTooLarge("too large for exact enumeration: " + std::to_string(count) +
                              " uncertain edges near '" + graph.label(u) + "' (cap " +
                              std::to_string(cap) + ")");
  }
}

/// Depth-first walk over every cascade outcome of u accepting. Each leaf
/// replays the cascade with a fixed prefix of edge decisions; the first
/// unseen edge defaults to live, and backtracking flips the deepest live
/// decision. visit(weight, gain) runs before the leaf is rolled back.
template <class Visit>
void enumerate_cascades(CascadeWorkspace& ws, const Graph& graph, NodeId u, Visit&& visit) {
  std::vector<char> decisions;
  while (true) {
    std::size_t pos = 0;
    double weight = 1.0;
    const Revenue gain = ws.accept(u, [&](EdgeId e) {
      if (pos == decisions.size()) decisions.push_back(1);
      const bool live = decisions[pos++] != 0;
      const double p = graph.edge_prob(e);
      weight *= live ? p : 1.0 - p;
      return live;
    });
    visit(weight, gain);
    ws.rollback();
    while (!decisions.empty() && decisions.back() == 0) decisions.pop_back();
    if (decisions.empty()) break;
    decisions.back() = 0;
  }
}

}  // namespace

std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::Exact:
      return "exact";
    case EstimateMethod::MonteCarlo:
      return "monte_carlo";
    case EstimateMethod::Heuristic:
      return "heuristic";
  }
  return "unknown";
}

std::size_t branching_edge_count(const Graph& graph, const PartialRealization& psi, NodeId u, int k) {
  if (k <= 0) return 0;
  const auto dist = bfs_distances(graph, u, k - 1);
  std::size_t count = 0;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    if (psi.edge_state(e) != TriState::Unknown) continue;
    const double p = graph.edge_prob(e);
    if (p <= 0.0 || p >= 1.0) continue;
    auto [a, b] = graph.endpoints(e);
    if (dist[a] >= 0 || dist[b] >= 0) ++count;
  }
  return count;
}

void for_each_invitation_outcome(
    const Graph& graph, const PartialRealization& psi, NodeId u, const GameParams& params,
    const std::function<void(const PartialRealization&, double, bool)>& fn, std::size_t cap) {
  require_uninvited(graph, psi, u);
  const double theta = graph.accept_prob(u);
  if (theta < 1.0) {
    PartialRealization rejected = psi;
    rejected.record_invitation(u, false);
    fn(rejected, 1.0 - theta, false);
  }
  if (theta <= 0.0) return;
  require_enumerable(graph, psi, u, params.k, cap);

  CascadeWorkspace ws(graph, params);
  ws.load(psi);
  enumerate_cascades(ws, graph, u, [&](double weight, Revenue) {
    PartialRealization next = psi;
    next.record_invitation(u, true);
    for (EdgeId e : ws.touched_edges()) next.set_edge(e, ws.edge_states()[e]);
    if (weight > 0.0) fn(next, theta * weight, true);
  });
}

MarginalEstimate exact_marginal(const EstimationContext& ctx, NodeId u, std::size_t cap) {
  require_uninvited(ctx.graph, ctx.psi, u);
  MarginalEstimate out{0.0, 0.0, EstimateMethod::Exact, 0};
  const double theta = ctx.graph.accept_prob(u);
  if (theta <= 0.0) return out;
  require_enumerable(ctx.graph, ctx.psi, u, ctx.params.k, cap);

  CascadeWorkspace ws(ctx.graph, ctx.params);
  ws.load(ctx.psi, ctx.hops);
  double expected = 0.0;
  enumerate_cascades(ws, ctx.graph, u, [&](double weight, Revenue gain) {
    expected += weight * static_cast<double>(gain);
  });
  out.value = theta * expected;
  return out;
}

MarginalEstimate exact_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                                const GameParams& params, std::size_t cap) {
  const auto hops = assign_hops(graph, psi, params.k);
  return exact_marginal(EstimationContext{graph, psi, hops, params}, u, cap);
}

MarginalEstimate mc_marginal(const EstimationContext& ctx, NodeId u, std::size_t n_samples, Rng& rng) {
  require_uninvited(ctx.graph, ctx.psi, u);
  if (n_samples == 0) throw ContractViolation("Monte Carlo needs at least one sample");
  const double theta = ctx.graph.accept_prob(u);

  CascadeWorkspace ws(ctx.graph, ctx.params);
  ws.load(ctx.psi, ctx.hops);
  auto sampler = [&](EdgeId e) { return rng.bernoulli(ctx.graph.edge_prob(e)); };

  // Welford running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 1; s <= n_samples; ++s) {
    double x = 0.0;
    if (rng.bernoulli(theta)) {
      x = static_cast<double>(ws.accept(u, sampler));
      ws.rollback();
    }
    const double delta = x - mean;
    mean += delta / static_cast<double>(s);
    m2 += delta * (x - mean);
  }
  MarginalEstimate out{mean, 0.0, EstimateMethod::MonteCarlo, n_samples};
  if (n_samples > 1) {
    const double var = m2 / static_cast<double>(n_samples - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_samples));
  }
  return out;
}

MarginalEstimate mc_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                             const GameParams& params, std::size_t n_samples, Rng& rng) {
  const auto hops = assign_hops(graph, psi, params.k);
  return mc_marginal(EstimationContext{graph, psi, hops, params}, u, n_samples, rng);
}

MarginalEstimate heuristic_marginal(const EstimationContext& ctx, NodeId u) {
  require_uninvited(ctx.graph, ctx.psi, u);
  const auto& graph = ctx.graph;
  const auto& params = ctx.params;
  const auto& hop = ctx.hops.hop;

  constexpr int kUnseen = -1;
  std::vector<int> layer(graph.node_count(), kUnseen);
  std::vector<double> prob(graph.node_count(), 0.0);

  double value = static_cast<double>(params.at(0) - hop_revenue(params, hop[u]));
  layer[u] = 0;
  prob[u] = 1.0;
  std::vector<NodeId> current{u};
  std::vector<NodeId> next;
  for (int i = 1; i <= params.k && !current.empty(); ++i) {
    next.clear();
    for (NodeId x : current) {
      for (const auto& a : graph.adjacency(x)) {
        const TriState state = ctx.psi.edge_state(a.edge);
        if (state == TriState::Zero) continue;
        const NodeId y = a.node;
        if (layer[y] == kUnseen) {
          if (hop[y] != HopAssignment::kNoHop && hop[y] <= i) continue;
          layer[y] = i;
          prob[y] = 1.0;  // running probability of missing y
          next.push_back(y);
        } else if (layer[y] != i) {
          continue;
        }
        const double pe = state == TriState::One ? 1.0 : graph.edge_prob(a.edge);
        prob[y] *= 1.0 - prob[x] * pe;
      }
    }
    const double layer_revenue = static_cast<double>(params.at(i));
    for (NodeId y : next) {
      prob[y] = 1.0 - prob[y];
      value += prob[y] * (layer_revenue - static_cast<double>(hop_revenue(params, hop[y])));
    }
    current.swap(next);
  }
  return {graph.accept_prob(u) * value, 0.0, EstimateMethod::Heuristic, 0};
}

MarginalEstimate heuristic_marginal(const Graph& graph, const PartialRealization& psi, NodeId u,
                                    const GameParams& params) {
  const auto hops = assign_hops(graph, psi, params.k);
  return heuristic_marginal(EstimationContext{graph, psi, hops, params}, u);
}

std::vector<NodeId> invalidation_set(const Graph& graph, NodeId u_last, int k) {
  const auto dist = bfs_distances(graph, u_last, 2 * k);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0) out.push_back(v);
  }
  return out;
}

MonteCarloEstimator::MonteCarloEstimator(std::size_t samples) : samples_(samples) {
  if (samples_ == 0) throw ValidationError("Monte Carlo sample count must be at least 1");
}

std::unique_ptr<MarginalEstimator> make_estimator(std::string_view spec) {
  if (spec == "exact") return std::make_unique<ExactEstimator>();
  if (spec == "heuristic") return std::make_unique<HeuristicEstimator>();
  if (spec == "mc") return std::make_unique<MonteCarloEstimator>();
  if (spec.starts_with("mc:")) {
    auto rest = spec.substr(3);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || n == 0) {
      throw ValidationError("bad Monte Carlo sample count '" + std::string(rest) + "'");
    }
    return std::make_unique<MonteCarloEstimator>(n);
  }
  throw ValidationError("estimator must be exact, mc:<n> or heuristic, got '" + std::string(spec) + "'");
}

}  // namespace khop
