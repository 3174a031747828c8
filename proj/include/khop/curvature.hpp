#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "khop/game.hpp"
#include "khop/network.hpp"

namespace khop {

/// Realization-independent bound on (R_0 + (n-1) R_1) / (R_0 - R_1).
/// Throws DomainError unless n >= 1 and R_0 > R_1.
double delta_global(std::size_t n, const GameParams& params);

/// P_i = sum_j R_j |S_j| where S_j holds the nodes exactly j hops from i
/// (all edges treated as live), j = 0..k.
std::vector<Revenue> potential_vector(const Graph& graph, const GameParams& params);

/// max_i P_i / (R_0 - R_1). Throws DomainError unless R_0 > R_1.
double delta_data(const Graph& graph, const GameParams& params);

/// 1 - exp(-1/delta). Throws DomainError for delta <= 0.
double approx_ratio(double delta);
/// 1 - (1 - 1/(b delta))^b, the finite-budget form.
double approx_ratio_finite(double delta, std::size_t b);

/// Delta(i|psi') / Delta(i|psi) with both terms computed exactly.
/// Requires psi to be a subrealization of psi', i uninvited in psi', and
/// Delta(i|psi) > 0 (DomainError otherwise).
double empirical_gamma(const Graph& graph, const GameParams& params, NodeId i,
                       const PartialRealization& psi, const PartialRealization& psi_prime);

/// Whether Delta_{b+1} <= (1 - 1/(b delta))^b Delta_1, the condition under
/// which the 1 - exp(-1/delta) guarantee applies. `increments` holds the
/// averaged greedy gains Delta_1..Delta_{b+1}.
bool check_gain_decay_hypothesis(const std::vector<double>& increments, std::size_t b, double delta);

struct CurvatureReport {
  double delta_global = 0.0;
  double delta_data = 0.0;
  std::vector<Revenue> potential;
  double ratio_global = 0.0;
  double ratio_data = 0.0;
};

CurvatureReport curvature_report(const Graph& graph, const GameParams& params);

/// Aligned text summary.
void write_curvature_report(std::ostream& out, const Graph& graph, const GameParams& params,
                            const CurvatureReport& report);
/// `node,potential` CSV.
void write_potential_csv(std::ostream& out, const Graph& graph, const CurvatureReport& report);

}  // namespace khop
