#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "khop/estimator.hpp"
#include "khop/game.hpp"
#include "khop/network.hpp"
#include "khop/rng.hpp"

namespace khop {

/// Partition matroid over a community structure: a set is independent iff
/// it holds at most b_i nodes of community C_i.
class PartitionMatroid {
 public:
  /// Throws ValidationError unless budgets align with the communities and
  /// 0 <= b_i <= |C_i|.
  PartitionMatroid(CommunityStructure structure, std::vector<std::size_t> budgets);

  const CommunityStructure& structure() const noexcept { return structure_; }
  std::span<const std::size_t> budgets() const noexcept { return budgets_; }
  std::size_t rank() const noexcept;

 private:
  CommunityStructure structure_;
  std::vector<std::size_t> budgets_;
};

bool is_independent(const PartitionMatroid& matroid, std::span<const NodeId> s);

/// Size budget b or community budgets b_1..b_r.
class BudgetConstraint {
 public:
  static BudgetConstraint size(std::size_t b);
  static BudgetConstraint partition(PartitionMatroid matroid);

  bool is_size() const noexcept { return std::holds_alternative<std::size_t>(kind_); }
  std::size_t size_budget() const { return std::get<std::size_t>(kind_); }
  const PartitionMatroid& matroid() const { return std::get<PartitionMatroid>(kind_); }
  /// Maximum number of invitations the constraint admits.
  std::size_t total() const;
  /// Throws ValidationError if the constraint does not fit the graph.
  void validate(const Graph& graph) const;

 private:
  explicit BudgetConstraint(std::variant<std::size_t, PartitionMatroid> kind) : kind_(std::move(kind)) {}
  std::variant<std::size_t, PartitionMatroid> kind_;
};

struct StepRecord {
  NodeId invitee;
  /// Estimated Delta used for the choice; empty for baselines.
  std::optional<double> delta;
  bool accepted;
  Revenue revenue_after;
};

struct RunResult {
  std::string policy;
  PolicyTrace trace;
  PartialRealization final_psi;
  Revenue realized_revenue = 0;
  std::vector<StepRecord> per_step;
};

struct SolverOptions {
  /// Refresh cached Delta values only within 2k hops of an accepted invitee.
  bool incremental_invalidation = true;
  /// Workers for candidate evaluation within one greedy step.
  unsigned threads = 1;
};

/// Adaptive greedy under a size budget: b invitations, each to the
/// uninvited node with the largest estimated Delta (ties: smallest index).
RunResult rmsb_solve(const Graph& graph, const GameParams& params, std::size_t b,
                     const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options = {});

/// Adaptive greedy under community budgets; stops when no uninvited node
/// keeps the invited set independent.
RunResult rmcb_solve(const Graph& graph, const CommunityStructure& communities,
                     const GameParams& params, std::span<const std::size_t> budgets,
                     const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options = {});

/// Greedy under either constraint kind.
RunResult greedy_solve(const Graph& graph, const GameParams& params, const BudgetConstraint& constraint,
                       const MarginalEstimator& estimator, Rng& rng, const SolverOptions& options = {});

enum class BaselineKind { MaxDegree, Random, MaxProb };

std::string_view to_string(BaselineKind kind);

RunResult baseline_solve(BaselineKind kind, const Graph& graph, const GameParams& params,
                         const BudgetConstraint& constraint, Rng& rng);

/// JSON record: policy, seed, budget, invitations with outcomes and final revenue.
std::string run_record_json(const RunResult& result, const Graph& graph, std::uint64_t seed,
                            const BudgetConstraint& constraint);

}  // namespace khop
