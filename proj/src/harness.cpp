#include "khop/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "khop/error.hpp"
#include "khop/estimator.hpp"
#include "khop/parallel.hpp"
#include "khop/policies.hpp"
#include "khop/rng.hpp"

namespace khop {
namespace {

constexpr std::uint64_t kTrialTag = 0x747269616cULL;
constexpr std::uint64_t kThetaTag = 0x7468657461ULL;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  text = trim(text);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw ValidationError("bad boolean '" + std::string(text) + "' for " + std::string(key));
}

BaselineKind baseline_of(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::MaxDegree:
      return BaselineKind::MaxDegree;
    case PolicyKind::Random:
      return BaselineKind::Random;
    case PolicyKind::MaxProb:
      return BaselineKind::MaxProb;
    case PolicyKind::Greedy:
      break;
  }
  throw ContractViolation("greedy is not a baseline");
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

// --- Budget allocation ------------------------------------------------------

std::vector<std::size_t> allocate_budgets(std::span<const std::size_t> sizes, std::size_t total) {
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total > n) {
    throw InfeasibleError("total budget " + std::to_string(total) + " exceeds " + std::to_string(n) +
                          " nodes");
  }
  std::vector<std::size_t> budgets(sizes.size(), 0);
  if (total == 0) return budgets;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    budgets[i] = sizes[i] * total / n;
    assigned += budgets[i];
  }
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  while (assigned < total) {
    for (std::size_t i : order) {
      if (assigned == total) break;
      if (budgets[i] < sizes[i]) {
        ++budgets[i];
        ++assigned;
      }
    }
  }
  return budgets;
}

std::vector<std::size_t> allocate_budgets(const CommunityStructure& communities, std::size_t total) {
  const auto sizes = communities.sizes();
  return allocate_budgets(std::span<const std::size_t>(sizes), total);
}

// --- Configuration -----------------------------------------------------------

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Greedy:
      return "greedy";
    case PolicyKind::MaxDegree:
      return "maxdegree";
    case PolicyKind::Random:
      return "random";
    case PolicyKind::MaxProb:
      return "maxprob";
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  for (auto kind : {PolicyKind::Greedy, PolicyKind::MaxDegree, PolicyKind::Random, PolicyKind::MaxProb}) {
    if (name == to_string(kind)) return kind;
  }
  throw ValidationError("unknown policy '" + std::string(name) +
                        "' (expected greedy, maxdegree, random or maxprob)");
}

void ExperimentConfig::validate() const {
  (void)game();
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (policies.empty()) throw ValidationError("no policies selected");
  if (edge_prob && !(*edge_prob >= 0.0 && *edge_prob <= 1.0)) {
    throw ValidationError("edge probability outside [0,1]");
  }
  (void)parse_theta_mode(theta);
  (void)make_estimator(estimator);
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "graph") {
    config.graph_path = std::string(value);
  } else if (key == "communities") {
    config.community_path = std::string(value);
  } else if (key == "k") {
    config.k = parse_number<int>(key, value);
  } else if (key == "revenue") {
    config.revenue.clear();
    for (auto item : split_list(value)) config.revenue.push_back(parse_number<Revenue>(key, item));
  } else if (key == "p") {
    if (value == "file") {
      config.edge_prob.reset();
    } else {
      config.edge_prob = parse_number<double>(key, value);
    }
  } else if (key == "theta") {
    (void)parse_theta_mode(value);
    config.theta = std::string(value);
  } else if (key == "resample-theta") {
    config.resample_theta = parse_bool(key, value);
  } else if (key == "budget" || key == "community-total") {
    config.budgets.clear();
    for (auto item : split_list(value)) config.budgets.push_back(parse_number<std::size_t>(key, item));
    config.community_budget = key == "community-total";
  } else if (key == "policies") {
    config.policies.clear();
    for (auto item : split_list(value)) config.policies.push_back(parse_policy(item));
  } else if (key == "trials") {
    config.trials = parse_number<std::size_t>(key, value);
  } else if (key == "estimator") {
    (void)make_estimator(value);
    config.estimator = std::string(value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    config.out_dir = std::string(value);
  } else if (key == "threads") {
    config.threads = parse_number<unsigned>(key, value);
  } else {
    throw ValidationError("unknown setting '" + std::string(key) + "'");
  }
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string(), line_no, "expected key=value");
    try {
      apply_setting(base, trim(text.substr(0, eq)), text.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  return base;
}

std::vector<std::size_t> default_budget_points(std::size_t n) {
  if (n >= 20) return {5, 10, 15, 20};
  std::vector<std::size_t> out;
  for (std::size_t q = 1; q <= 4; ++q) {
    const std::size_t b = (n * q + 3) / 4;
    if (b > 0 && (out.empty() || out.back() != b)) out.push_back(b);
  }
  return out;
}

// --- Running -----------------------------------------------------------------

const ExperimentRow* ExperimentResult::find(std::string_view policy, std::size_t budget) const {
  for (const auto& r : rows) {
    if (r.policy == policy && r.budget == budget) return &r;
  }
  return nullptr;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, PolicyKind policy) {
  return derive_seed(master, {kTrialTag, trial, static_cast<std::uint64_t>(policy)});
}

std::uint64_t theta_seed(std::uint64_t master, std::optional<std::size_t> trial) {
  if (!trial) return derive_seed(master, {kThetaTag});
  return derive_seed(master, {kThetaTag, *trial + 1});
}

Graph load_experiment_graph(const ExperimentConfig& config) {
  Graph graph = load_graph(config.graph_path, config.edge_prob.value_or(0.5),
                           parse_theta_mode(config.theta), theta_seed(config.seed, std::nullopt));
  if (config.edge_prob) graph = graph.with_edge_probs(*config.edge_prob);
  return graph;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Graph graph = load_experiment_graph(config);
  std::optional<CommunityStructure> communities;
  if (config.community_path) communities = load_communities(*config.community_path, graph);
  return run_experiment(graph, communities ? &*communities : nullptr, config);
}

ExperimentResult run_experiment(const Graph& graph, const CommunityStructure* communities,
                                const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const GameParams params = config.game();
  const auto estimator = make_estimator(config.estimator);
  if (config.community_budget && communities == nullptr) {
    throw ValidationError("community budgets need a community structure");
  }
  const bool resample = config.resample_theta &&
                        std::holds_alternative<ThetaUniform>(parse_theta_mode(config.theta));

  std::vector<Graph> trial_graphs;
  if (resample) {
    trial_graphs.reserve(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
      Rng rng(theta_seed(config.seed, t));
      std::vector<double> theta(graph.node_count());
      for (auto& v : theta) v = rng.uniform();
      trial_graphs.push_back(graph.with_accept_probs(std::move(theta)));
    }
  }

  const auto points = config.budgets.empty() ? default_budget_points(graph.node_count()) : config.budgets;
  std::vector<BudgetConstraint> constraints;
  for (std::size_t b : points) {
    if (config.community_budget) {
      constraints.push_back(BudgetConstraint::partition(
          PartitionMatroid(*communities, allocate_budgets(*communities, b))));
    } else {
      constraints.push_back(BudgetConstraint::size(b));
    }
    constraints.back().validate(graph);
  }

  ExperimentResult result;
  for (PolicyKind policy : config.policies) {
    for (std::size_t bi = 0; bi < points.size(); ++bi) {
      std::vector<double> values(config.trials, 0.0);
      parallel_for(config.trials, config.threads, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(config.seed, t, policy);
        const Graph& g = resample ? trial_graphs[t] : graph;
        try {
          Rng rng(seed);
          RunResult run = policy == PolicyKind::Greedy
                              ? greedy_solve(g, params, constraints[bi], *estimator, rng)
                              : baseline_solve(baseline_of(policy), g, params, constraints[bi], rng);
          values[t] = static_cast<double>(run.realized_revenue);
        } catch (const std::exception& e) {
          throw Error("trial " + std::to_string(t) + " of " + std::string(to_string(policy)) +
                      " at budget " + std::to_string(points[bi]) + " failed (seed " +
                      std::to_string(seed) + "): " + e.what());
        }
      });

      ExperimentRow row;
      row.policy = std::string(to_string(policy));
      row.budget = points[bi];
      row.trials = values.size();
      double sum = 0.0;
      for (double v : values) sum += v;
      row.mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - row.mean) * (v - row.mean);
      row.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
      row.min = *std::min_element(values.begin(), values.end());
      row.max = *std::max_element(values.begin(), values.end());
      result.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const auto& a, const auto& b) {
    if (a.policy != b.policy) return a.policy < b.policy;
    return a.budget < b.budget;
  });
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// --- Output ------------------------------------------------------------------

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "policy,budget,mean_revenue,stddev,trials\n";
  for (const auto& r : result.rows) {
    out << r.policy << ',' << r.budget << ',' << fixed4(r.mean) << ',' << fixed4(r.stddev) << ','
        << r.trials << '\n';
  }
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, result);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace khop
