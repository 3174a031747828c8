#include "khop/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "khop/error.hpp"
#include "khop/estimator.hpp"

namespace khop {
namespace {

double primal_gap(const GameParams& params) {
  params.validate();
  if (params.k < 1) throw DomainError("curvature bound needs k >= 1 (R_1 undefined)");
  const Revenue gap = params.at(0) - params.at(1);
  if (gap <= 0) throw DomainError("curvature bound undefined when R_0 == R_1");
  return static_cast<double>(gap);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double delta_global(std::size_t n, const GameParams& params) {
  if (n < 1) throw DomainError("delta_global needs n >= 1");
  const double gap = primal_gap(params);
  return (static_cast<double>(params.at(0)) + static_cast<double>(n - 1) * static_cast<double>(params.at(1))) / gap;
}

std::vector<Revenue> potential_vector(const Graph& graph, const GameParams& params) {
  params.validate();
  std::vector<Revenue> out(graph.node_count(), 0);
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    const auto dist = bfs_distances(graph, i, params.k);
    Revenue total = 0;
    for (int d : dist) {
      if (d >= 0) total += params.at(d);
    }
    out[i] = total;
  }
  return out;
}

double delta_data(const Graph& graph, const GameParams& params) {
  const double gap = primal_gap(params);
  const auto p = potential_vector(graph, params);
  const Revenue pmax = p.empty() ? 0 : *std::max_element(p.begin(), p.end());
  return static_cast<double>(pmax) / gap;
}

double approx_ratio(double delta) {
  if (!(delta > 0.0)) throw DomainError("approximation ratio needs delta > 0");
  return -std::expm1(-1.0 / delta);
}

double approx_ratio_finite(double delta, std::size_t b) {
  if (!(delta > 0.0)) throw DomainError("approximation ratio needs delta > 0");
  if (b == 0) throw DomainError("finite-budget ratio needs b >= 1");
  const double x = 1.0 / (static_cast<double>(b) * delta);
  if (x >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(b) * std::log1p(-x));
}

double empirical_gamma(const Graph& graph, const GameParams& params, NodeId i,
                       const PartialRealization& psi, const PartialRealization& psi_prime) {
  if (!is_subrealization(psi, psi_prime)) {
    throw ContractViolation("psi is not a subrealization of psi'");
  }
  const double base = exact_marginal(graph, psi, i, params).value;
  if (!(base > 0.0)) throw DomainError("Gamma undefined: Delta(i|psi) is zero");
  return exact_marginal(graph, psi_prime, i, params).value / base;
}

bool check_gain_decay_hypothesis(const std::vector<double>& increments, std::size_t b, double delta) {
  if (increments.size() < b + 1) {
    throw ContractViolation("need b+1 increments, got " + std::to_string(increments.size()));
  }
  if (b == 0) throw DomainError("hypothesis needs b >= 1");
  const double factor = 1.0 - approx_ratio_finite(delta, b);
  return increments[b] <= factor * increments[0];
}

CurvatureReport curvature_report(const Graph& graph, const GameParams& params) {
  CurvatureReport r;
  r.potential = potential_vector(graph, params);
  r.delta_global = delta_global(graph.node_count(), params);
  r.delta_data = delta_data(graph, params);
  r.ratio_global = approx_ratio(r.delta_global);
  r.ratio_data = approx_ratio(r.delta_data);
  return r;
}

void write_curvature_report(std::ostream& out, const Graph& graph, const GameParams& params,
                            const CurvatureReport& report) {
  auto argmax = std::max_element(report.potential.begin(), report.potential.end());
  out << "nodes            " << graph.node_count() << '\n'
      << "edges            " << graph.edge_count() << '\n'
      << "k                " << params.k << '\n'
      << "revenue         ";
  for (Revenue r : params.revenue) out << ' ' << r;
  out << '\n';
  if (argmax != report.potential.end()) {
    const auto node = static_cast<NodeId>(argmax - report.potential.begin());
    out << "P_max            " << *argmax << " (node " << graph.label(node) << ")\n";
  }
  out << "delta_global     " << fixed(report.delta_global, 4) << '\n'
      << "delta_data       " << fixed(report.delta_data, 4) << '\n'
      << "ratio_global     " << fixed(report.ratio_global, 8) << '\n'
      << "ratio_data       " << fixed(report.ratio_data, 8) << '\n';
}

void write_potential_csv(std::ostream& out, const Graph& graph, const CurvatureReport& report) {
  out << "node,potential\n";
  for (NodeId u = 0; u < report.potential.size(); ++u) {
    out << graph.label(u) << ',' << report.potential[u] << '\n';
  }
}

}  // namespace khop
