#include "khop/policies.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "khop/error.hpp"
#include "khop/parallel.hpp"

namespace khop {

// --- Constraints ----------------------------------------------------------

PartitionMatroid::PartitionMatroid(CommunityStructure structure, std::vector<std::size_t> budgets)
    : structure_(std::move(structure)), budgets_(std::move(budgets)) {
  if (budgets_.size() != structure_.size()) {
    throw ValidationError("budget vector has " + std::to_string(budgets_.size()) +
                          " entries for " + std::to_string(structure_.size()) + " communities");
  }
  for (std::size_t i = 0; i < budgets_.size(); ++i) {
    if (budgets_[i] > structure_.members(i).size()) {
      throw ValidationError("budget " + std::to_string(budgets_[i]) + " exceeds the size of community " +
                            structure_.label(i));
    }
  }
}

std::size_t PartitionMatroid::rank() const noexcept {
  return std::accumulate(budgets_.begin(), budgets_.end(), std::size_t{0});
}

bool is_independent(const PartitionMatroid& matroid, std::span<const NodeId> s) {
  std::vector<std::size_t> count(matroid.structure().size(), 0);
  for (NodeId u : s) {
    const std::size_t c = matroid.structure().community_of(u);
    if (++count[c] > matroid.budgets()[c]) return false;
  }
  return true;
}

BudgetConstraint BudgetConstraint::size(std::size_t b) { return BudgetConstraint(b); }

BudgetConstraint BudgetConstraint::partition(PartitionMatroid matroid) {
  return BudgetConstraint(std::move(matroid));
}

std::size_t BudgetConstraint::total() const {
  return is_size() ? size_budget() : matroid().rank();
}

void BudgetConstraint::validate(const Graph& graph) const {
  if (is_size()) {
    const std::size_t b = size_budget();
    if (b < 1 || b > graph.node_count()) {
      throw ValidationError("size budget " + std::to_string(b) + " outside [1, " +
                            std::to_string(graph.node_count()) + "]");
    }
    return;
  }
  std::size_t covered = 0;
  for (std::size_t i = 0; i < matroid().structure().size(); ++i) {
    covered += matroid().structure().members(i).size();
  }
  if (covered != graph.node_count()) {
    throw ValidationError("community structure does not cover the graph");
  }
}

// --- Shared invitation loop ---------------------------------------------

namespace {

class Feasibility {
 public:
  explicit Feasibility(const BudgetConstraint& constraint) : constraint_(constraint) {
    if (!constraint.is_size()) count_.assign(constraint.matroid().structure().size(), 0);
  }

  bool allows(NodeId v) const {
    if (constraint_.is_size()) return invited_ < constraint_.size_budget();
    const auto& m = constraint_.matroid();
    const std::size_t c = m.structure().community_of(v);
    return count_[c] < m.budgets()[c];
  }

  void add(NodeId v) {
    ++invited_;
    if (!constraint_.is_size()) ++count_[constraint_.matroid().structure().community_of(v)];
  }

 private:
  const BudgetConstraint& constraint_;
  std::size_t invited_ = 0;
  std::vector<std::size_t> count_;
};

struct Choice {
  NodeId node;
  std::optional<double> delta;
};

class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual void start(std::uint64_t seed) { (void)seed; }
  /// `candidates` is non-empty and ascending.
  virtual Choice choose(const EstimationContext& ctx, const std::vector<NodeId>& candidates, Rng& rng) = 0;
  virtual void observe(NodeId u, bool accepted) {
    (void)u;
    (void)accepted;
  }
};

RunResult run_policy(std::string name, const Graph& graph, const GameParams& params,
                     const BudgetConstraint& constraint, Rng& rng, Chooser& chooser) {
  params.validate();
  constraint.validate(graph);
  RunResult result;
  result.policy = std::move(name);
  result.final_psi = PartialRealization(graph);
  auto& psi = result.final_psi;

  chooser.start(rng.next());
  Feasibility feasible(constraint);
  HopAssignment hops = assign_hops(graph, psi, params.k);
  std::vector<NodeId> candidates;
  while (true) {
    candidates.clear();
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      if (!psi.is_invited(v) && feasible.allows(v)) candidates.push_back(v);
    }
    if (candidates.empty()) break;

    const Choice choice = chooser.choose(EstimationContext{graph, psi, hops, params}, candidates, rng);
    auto outcome = simulate_invitation(graph, psi, choice.node, params, rng);
    psi = std::move(outcome.psi);
    feasible.add(choice.node);
    result.trace.append(choice.node, outcome.accepted);
    if (outcome.accepted) hops = assign_hops(graph, psi, params.k);
    result.realized_revenue = revenue(hops, params);
    result.per_step.push_back({choice.node, choice.delta, outcome.accepted, result.realized_revenue});
    chooser.observe(choice.node, outcome.accepted);
  }
  return result;
}

/// Keeps a Delta cache keyed by node. Entries are refreshed when an accepted
/// invitee lands within 2k hops (or every step with invalidation disabled).
/// Each node's estimation stream is keyed by how many times its cache entry
/// was invalidated, so a recomputation of an unaffected entry reproduces the
/// cached value exactly.
class GreedyChooser final : public Chooser {
 public:
  GreedyChooser(const Graph& graph, const GameParams& params, const MarginalEstimator& estimator,
                const SolverOptions& options)
      : graph_(graph),
        params_(params),
        estimator_(estimator),
        options_(options),
        delta_(graph.node_count(), 0.0),
        valid_(graph.node_count(), 0),
        epoch_(graph.node_count(), 0) {}

  void start(std::uint64_t seed) override { seed_ = seed; }

  Choice choose(const EstimationContext& ctx, const std::vector<NodeId>& candidates, Rng&) override {
    std::vector<NodeId> stale;
    for (NodeId v : candidates) {
      if (!valid_[v]) stale.push_back(v);
    }
    parallel_for(stale.size(), options_.threads, [&](std::size_t i) {
      const NodeId v = stale[i];
      delta_[v] = estimator_.estimate(ctx, v, derive_seed(seed_, {v, epoch_[v]})).value;
    });
    for (NodeId v : stale) valid_[v] = 1;

    NodeId best = candidates.front();
    for (NodeId v : candidates) {
      if (delta_[v] > delta_[best]) best = v;
    }
    return {best, delta_[best]};
  }

  void observe(NodeId u, bool accepted) override {
    if (accepted) {
      for (NodeId v : invalidation_set(graph_, u, params_.k)) {
        ++epoch_[v];
        valid_[v] = 0;
      }
    }
    if (!options_.incremental_invalidation) std::fill(valid_.begin(), valid_.end(), 0);
  }

 private:
  const Graph& graph_;
  const GameParams& params_;
  const MarginalEstimator& estimator_;
  SolverOptions options_;
  std::uint64_t seed_ = 0;
  std::vector<double> delta_;
  std::vector<char> valid_;
  std::vector<std::uint64_t> epoch_;
};

class BaselineChooser final : public Chooser {
 public:
  explicit BaselineChooser(BaselineKind kind) : kind_(kind) {}

  Choice choose(const EstimationContext& ctx, const std::vector<NodeId>& candidates, Rng& rng) override {
    switch (kind_) {
      case BaselineKind::Random:
        return {candidates[rng.uniform_index(candidates.size())], std::nullopt};
      case BaselineKind::MaxDegree: {
        NodeId best = candidates.front();
        for (NodeId v : candidates) {
          if (ctx.graph.degree(v) > ctx.graph.degree(best)) best = v;
        }
        return {best, std::nullopt};
      }
      case BaselineKind::MaxProb: {
        NodeId best = candidates.front();
        for (NodeId v : candidates) {
          if (ctx.graph.accept_prob(v) > ctx.graph.accept_prob(best)) best = v;
        }
        return {best, std::nullopt};
      }
    }
    throw ContractViolation("unknown baseline");
  }

 private:
  BaselineKind kind_;
};

}  // namespace

// --- Solvers --------------------------------------------------------------

RunResult greedy_solve(const Graph& graph, const GameParams& params, const BudgetConstraint& constraint,
                       const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options) {
  GreedyChooser chooser(graph, params, estimator, options);
  return run_policy("greedy", graph, params, constraint, rng, chooser);
}

RunResult rmsb_solve(const Graph& graph, const GameParams& params, std::size_t b,
                     const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options) {
  return greedy_solve(graph, params, BudgetConstraint::size(b), estimator, rng, options);
}

RunResult rmcb_solve(const Graph& graph, const CommunityStructure& communities,
                     const GameParams& params, std::span<const std::size_t> budgets,
                     const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options) {
  auto constraint = BudgetConstraint::partition(
      PartitionMatroid(communities, std::vector<std::size_t>(budgets.begin(), budgets.end())));
  return greedy_solve(graph, params, constraint, estimator, rng, options);
}

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::MaxDegree:
      return "maxdegree";
    case BaselineKind::Random:
      return "random";
    case BaselineKind::MaxProb:
      return "maxprob";
  }
  return "unknown";
}

RunResult baseline_solve(BaselineKind kind, const Graph& graph, const GameParams& params,
                         const BudgetConstraint& constraint, Rng& rng) {
  BaselineChooser chooser(kind);
  return run_policy(std::string(to_string(kind)), graph, params, constraint, rng, chooser);
}

std::string run_record_json(const RunResult& result, const Graph& graph, std::uint64_t seed,
                            const BudgetConstraint& constraint) {
  using nlohmann::ordered_json;
  ordered_json record;
  record["policy"] = result.policy;
  record["seed"] = seed;
  if (constraint.is_size()) {
    record["budget"] = constraint.size_budget();
  } else {
    ordered_json budgets = ordered_json::array();
    const auto& m = constraint.matroid();
    for (std::size_t i = 0; i < m.budgets().size(); ++i) {
      budgets.push_back({{"community", m.structure().label(i)}, {"budget", m.budgets()[i]}});
    }
    record["budget"] = std::move(budgets);
  }
  ordered_json steps = ordered_json::array();
  for (const auto& s : result.per_step) {
    ordered_json step;
    step["node"] = graph.label(s.invitee);
    step["accepted"] = s.accepted;
    step["delta"] = s.delta ? ordered_json(*s.delta) : ordered_json(nullptr);
    step["revenue_after"] = s.revenue_after;
    steps.push_back(std::move(step));
  }
  record["invitations"] = std::move(steps);
  record["final_revenue"] = result.realized_revenue;
  return record.dump(2);
}

}  // namespace khop
