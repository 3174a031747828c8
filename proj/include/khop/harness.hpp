#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "khop/network.hpp"

namespace khop {

/// Splits the total invitation count over communities proportionally to
/// their size (floor), then hands out the remainder one by one from the
/// largest community to the smallest, cycling and skipping saturated
/// communities, until the budgets sum to `total`.
/// Throws InfeasibleError if total exceeds the number of nodes.
std::vector<std::size_t> allocate_budgets(std::span<const std::size_t> community_sizes, std::size_t total);
std::vector<std::size_t> allocate_budgets(const CommunityStructure& communities, std::size_t total);

enum class PolicyKind { Greedy, MaxDegree, Random, MaxProb };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

struct ExperimentConfig {
  std::filesystem::path graph_path;
  std::optional<std::filesystem::path> community_path;
  int k = 2;
  std::vector<Revenue> revenue{8, 6, 4};
  /// Edge probability for every edge; empty means "take the third column of
  /// the edge list, 0.5 where absent".
  std::optional<double> edge_prob = 0.5;
  std::string theta = "uniform";
  /// Draw a fresh uniform acceptance vector per trial instead of once.
  bool resample_theta = false;
  /// Budget sweep points: size budgets, or community totals when
  /// `community_budget` is set. Empty selects default_budget_points().
  std::vector<std::size_t> budgets;
  bool community_budget = false;
  std::vector<PolicyKind> policies{PolicyKind::Greedy, PolicyKind::MaxDegree, PolicyKind::Random,
                                   PolicyKind::MaxProb};
  std::size_t trials = 50;
  std::string estimator = "heuristic";
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;

  GameParams game() const { return GameParams::make(k, revenue); }
  void validate() const;
};

/// Applies one `key=value` setting; keys are the CLI flag names without
/// leading dashes (graph, communities, k, revenue, p, theta, budget,
/// community-total, policies, trials, estimator, seed, out, threads,
/// resample-theta). Throws ValidationError for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads a flat `key=value` file (blank lines and `#` comments ignored).
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

/// {5,10,15,20} when the graph has at least 20 nodes, otherwise quarters of n.
std::vector<std::size_t> default_budget_points(std::size_t n);

struct ExperimentRow {
  std::string policy;
  std::size_t budget = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t trials = 0;
};

struct ExperimentResult {
  /// Sorted by (policy, budget).
  std::vector<ExperimentRow> rows;
  double runtime_seconds = 0.0;

  const ExperimentRow* find(std::string_view policy, std::size_t budget) const;
};

/// Seed of trial `trial` for `policy`; independent of which other policies run.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, PolicyKind policy);
/// Seed used to sample a uniform acceptance vector (trial = nullopt: shared).
std::uint64_t theta_seed(std::uint64_t master, std::optional<std::size_t> trial);

/// Loads the configured edge list, applying the edge-probability and theta
/// modes (uniform theta drawn from the shared theta seed).
Graph load_experiment_graph(const ExperimentConfig& config);

/// Loads the configured files and runs the sweep.
ExperimentResult run_experiment(const ExperimentConfig& config);
/// Runs the sweep on an already loaded graph. `communities` is required
/// when config.community_budget is set.
ExperimentResult run_experiment(const Graph& graph, const CommunityStructure* communities,
                                const ExperimentConfig& config);

void write_csv(std::ostream& out, const ExperimentResult& result);
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// Static SVG: one polyline per policy over budget, legend, labelled axes.
void write_plot(std::ostream& out, const ExperimentResult& result);
void emit_plot(const ExperimentResult& result, const std::filesystem::path& path);

}  // namespace khop
