// khopcg: command-line front end for the k-hop collaborate game library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "khop/curvature.hpp"
#include "khop/error.hpp"
#include "khop/estimator.hpp"
#include "khop/game.hpp"
#include "khop/harness.hpp"
#include "khop/network.hpp"
#include "khop/policies.hpp"

namespace {

using namespace khop;

/// Flags shared by every subcommand; each maps onto an apply_setting key.
struct CommonFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> settings;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value file; flags override it");
  static const char* const kKeys[][2] = {
      {"graph", "edge list (u v [p] per line)"},
      {"communities", "node-to-community file"},
      {"k", "hop limit"},
      {"revenue", "comma-separated R_0..R_k, e.g. 8,6,4"},
      {"p", "edge probability for every edge, or 'file'"},
      {"theta", "uniform | const:<v> | file:<path>"},
      {"resample-theta", "draw a fresh uniform theta per trial (0/1)"},
      {"budget", "size budget(s), comma-separated"},
      {"community-total", "community budget total(s), comma-separated"},
      {"policies", "greedy,maxdegree,random,maxprob"},
      {"trials", "trials per budget point"},
      {"estimator", "exact | mc:<n> | heuristic"},
      {"seed", "master seed"},
      {"out", "output directory"},
      {"threads", "worker threads for trials"},
  };
  for (const auto& [key, help] : kKeys) {
    const std::string name = key;
    cmd->add_option_function<std::string>(
        "--" + name, [&flags, name](const std::string& v) { flags.settings.emplace_back(name, v); }, help);
  }
}

ExperimentConfig resolve(const CommonFlags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) config = load_config_file(flags.config_path);
  for (const auto& [key, value] : flags.settings) apply_setting(config, key, value);
  if (config.graph_path.empty()) throw ValidationError("no graph given (--graph or graph= in --config)");
  config.validate();
  return config;
}

std::optional<CommunityStructure> communities_for(const ExperimentConfig& config, const Graph& graph) {
  if (!config.community_path) return std::nullopt;
  return load_communities(*config.community_path, graph);
}

int run_solve(const CommonFlags& flags, const std::string& policy_name, const std::string& psi_out) {
  const ExperimentConfig config = resolve(flags);
  const Graph graph = load_experiment_graph(config);
  const auto communities = communities_for(config, graph);
  const GameParams params = config.game();
  const PolicyKind policy = parse_policy(policy_name);
  if (config.budgets.size() > 1) throw ValidationError("solve takes a single budget");
  const std::size_t b =
      config.budgets.empty() ? default_budget_points(graph.node_count()).front() : config.budgets.front();

  std::optional<BudgetConstraint> constraint;
  if (config.community_budget) {
    if (!communities) throw ValidationError("--community-total needs --communities");
    constraint = BudgetConstraint::partition(PartitionMatroid(*communities, allocate_budgets(*communities, b)));
  } else {
    constraint = BudgetConstraint::size(b);
  }

  // Same stream as trial 0 of an experiment with equal settings.
  Rng rng(trial_seed(config.seed, 0, policy));
  RunResult run;
  if (policy == PolicyKind::Greedy) {
    const auto estimator = make_estimator(config.estimator);
    run = greedy_solve(graph, params, *constraint, *estimator, rng);
  } else {
    const BaselineKind kind = policy == PolicyKind::MaxDegree ? BaselineKind::MaxDegree
                              : policy == PolicyKind::Random  ? BaselineKind::Random
                                                              : BaselineKind::MaxProb;
    run = baseline_solve(kind, graph, params, *constraint, rng);
  }
  std::cout << run_record_json(run, graph, config.seed, *constraint) << '\n';
  if (!psi_out.empty()) {
    std::ofstream out(psi_out, std::ios::binary);
    if (!out) throw IoError("cannot write " + psi_out);
    write_realization(out, graph, run.final_psi);
  }
  return 0;
}

int run_experiment_cmd(const CommonFlags& flags) {
  const ExperimentConfig config = resolve(flags);
  const ExperimentResult result = run_experiment(config);
  std::filesystem::create_directories(config.out_dir);
  const auto csv = config.out_dir / "results.csv";
  const auto svg = config.out_dir / "revenue.svg";
  emit_csv(result, csv);
  emit_plot(result, svg);
  write_csv(std::cout, result);
  std::cerr << "wrote " << csv.string() << " and " << svg.string() << " in " << result.runtime_seconds
            << " s\n";
  return 0;
}

int run_curvature(const CommonFlags& flags, const std::string& csv_path) {
  const ExperimentConfig config = resolve(flags);
  const Graph graph = load_experiment_graph(config);
  const GameParams params = config.game();
  const CurvatureReport report = curvature_report(graph, params);
  write_curvature_report(std::cout, graph, params, report);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + csv_path);
    write_potential_csv(out, graph, report);
  }
  return 0;
}

int run_stats(const CommonFlags& flags, const std::string& node_map) {
  const ExperimentConfig config = resolve(flags);
  const Graph graph = load_experiment_graph(config);
  const GraphStats stats = graph_stats(graph);
  std::printf("nodes           %zu\nedges           %zu\naverage degree  %.4f\n", stats.nodes, stats.edges,
              stats.average_degree);
  if (const auto communities = communities_for(config, graph)) {
    std::printf("communities     %zu\n", communities->size());
    for (std::size_t i = 0; i < communities->size(); ++i) {
      std::printf("  %-12s  %zu\n", communities->label(i).c_str(), communities->members(i).size());
    }
  }
  if (!node_map.empty()) {
    std::ofstream out(node_map, std::ios::binary);
    if (!out) throw IoError("cannot write " + node_map);
    graph.write_node_map(out);
  }
  return 0;
}

int run_delta(const CommonFlags& flags, const std::string& node, const std::string& psi_path) {
  const ExperimentConfig config = resolve(flags);
  const Graph graph = load_experiment_graph(config);
  const GameParams params = config.game();
  const PartialRealization psi = psi_path.empty() ? PartialRealization(graph) : load_realization(psi_path, graph);
  const HopAssignment hops = assign_hops(graph, psi, params.k);
  const auto estimator = make_estimator(config.estimator);
  const MarginalEstimate est =
      estimator->estimate(EstimationContext{graph, psi, hops, params}, graph.id_of(node), config.seed);
  std::printf("node       %s\nmethod     %s\ndelta      %.6f\nstd_error  %.6f\nsamples    %zu\n", node.c_str(),
              std::string(to_string(est.method)).c_str(), est.value, est.std_error, est.samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-hop collaborate game: adaptive revenue maximization"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string policy = "greedy";
  std::string psi_out;
  std::string csv_path;
  std::string node_map;
  std::string node;
  std::string psi_in;

  auto* solve = app.add_subcommand("solve", "run one policy and print its trace as JSON");
  add_common(solve, flags);
  solve->add_option("--policy", policy, "greedy | maxdegree | random | maxprob")->capture_default_str();
  solve->add_option("--dump-psi", psi_out, "write the final partial realization here");

  auto* experiment = app.add_subcommand("experiment", "budget sweep; writes results.csv and revenue.svg");
  add_common(experiment, flags);

  auto* curvature = app.add_subcommand("curvature", "curvature bounds and approximation ratios");
  add_common(curvature, flags);
  curvature->add_option("--csv", csv_path, "write node,potential CSV here");

  auto* stats = app.add_subcommand("stats", "graph statistics");
  add_common(stats, flags);
  stats->add_option("--emit-node-map", node_map, "write the index-to-label map here");

  auto* delta = app.add_subcommand("delta", "marginal benefit of one node under a realization dump");
  add_common(delta, flags);
  delta->add_option("--node", node, "node label")->required();
  delta->add_option("--psi", psi_in, "partial realization dump (default: nothing observed)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(flags, policy, psi_out);
    if (*experiment) return run_experiment_cmd(flags);
    if (*curvature) return run_curvature(flags, csv_path);
    if (*stats) return run_stats(flags, node_map);
    if (*delta) return run_delta(flags, node, psi_in);
  } catch (const khop::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
