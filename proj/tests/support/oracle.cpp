#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

#include "khop/estimator.hpp"

namespace oracle {

std::int64_t full_revenue(const khop::Graph& g, const std::vector<NodeId>& initiators,
                          const std::vector<bool>& live, const khop::GameParams& params) {
  std::vector<int> dist(g.node_count(), -1);
  std::deque<NodeId> queue;
  for (NodeId s : initiators) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    if (dist[x] == params.k) continue;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (!live[e]) continue;
      auto [a, b] = g.endpoints(e);
      NodeId y;
      if (a == x) {
        y = b;
      } else if (b == x) {
        y = a;
      } else {
        continue;
      }
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  std::int64_t total = 0;
  for (int d : dist) {
    if (d >= 0) total += params.revenue[static_cast<std::size_t>(d)];
  }
  return total;
}

double delta(const khop::Graph& g, const khop::PartialRealization& psi, NodeId u,
             const khop::GameParams& params) {
  std::vector<NodeId> initiators;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (psi.user_state(v) == khop::TriState::One) initiators.push_back(v);
  }
  std::vector<EdgeId> free;
  std::vector<bool> live(g.edge_count(), false);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (psi.edge_state(e) == khop::TriState::Unknown) {
      free.push_back(e);
    } else {
      live[e] = psi.edge_state(e) == khop::TriState::One;
    }
  }
  auto with_u = initiators;
  with_u.push_back(u);

  double expected = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const bool on = (mask >> i) & 1U;
      const double p = g.edge_prob(free[i]);
      live[free[i]] = on;
      weight *= on ? p : 1.0 - p;
    }
    if (weight == 0.0) continue;
    const auto gain = full_revenue(g, with_u, live, params) - full_revenue(g, initiators, live, params);
    expected += weight * static_cast<double>(gain);
  }
  return g.accept_prob(u) * expected;
}

khop::Graph make_graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges, double p,
                       double theta) {
  khop::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.node(std::to_string(i), theta);
  for (auto [u, v] : edges) b.add_edge(u, v, p);
  return b.build();
}

namespace {

int pair_index(std::size_t n, NodeId a, NodeId b) {
  int idx = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j, ++idx) {
      if ((i == a && j == b) || (i == b && j == a)) return idx;
    }
  }
  return -1;
}

bool connected(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<NodeId(NodeId)> find = [&](NodeId x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : edges) parent[find(a)] = find(b);
  for (NodeId i = 1; i < n; ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

}  // namespace

std::vector<SmallGraph> connected_graphs(std::size_t max_nodes, std::size_t max_edges) {
  std::vector<SmallGraph> out;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    std::vector<std::pair<NodeId, NodeId>> all;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) all.emplace_back(i, j);
    }
    std::vector<std::vector<NodeId>> perms;
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::unordered_set<std::uint32_t> seen;
    const std::uint32_t limit = std::uint32_t{1} << all.size();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_edges) continue;
      if (n > 1 && static_cast<std::size_t>(__builtin_popcount(mask)) < n - 1) continue;
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (std::size_t i = 0; i < all.size(); ++i) {
        if ((mask >> i) & 1U) edges.push_back(all[i]);
      }
      if (!connected(n, edges)) continue;
      std::uint32_t canon = mask;
      for (const auto& pm : perms) {
        std::uint32_t img = 0;
        for (auto [a, b] : edges) img |= std::uint32_t{1} << pair_index(n, pm[a], pm[b]);
        canon = std::min(canon, img);
      }
      if (seen.insert(canon).second) out.push_back({n, std::move(edges)});
    }
  }
  return out;
}

std::string state_key(const khop::PartialRealization& psi) {
  std::string key;
  key.reserve(psi.node_count() + psi.edge_count() + 1);
  for (NodeId u = 0; u < psi.node_count(); ++u) key.push_back(static_cast<char>('0' + int(psi.user_state(u))));
  key.push_back('|');
  for (EdgeId e = 0; e < psi.edge_count(); ++e) key.push_back(static_cast<char>('0' + int(psi.edge_state(e))));
  return key;
}

std::vector<khop::PartialRealization> reachable_states(const khop::Graph& g, const khop::GameParams& params,
                                                       std::size_t depth, std::size_t max_states) {
  std::vector<khop::PartialRealization> states{khop::PartialRealization(g)};
  std::set<std::string> seen{state_key(states.front())};
  std::size_t begin = 0;
  for (std::size_t level = 0; level < depth; ++level) {
    const std::size_t end = states.size();
    for (std::size_t s = begin; s < end; ++s) {
      for (NodeId u = 0; u < g.node_count(); ++u) {
        if (states[s].is_invited(u)) continue;
        const khop::PartialRealization base = states[s];
        khop::for_each_invitation_outcome(g, base, u, params,
                                          [&](const khop::PartialRealization& next, double, bool) {
                                            if (states.size() >= max_states) return;
                                            if (seen.insert(state_key(next)).second) states.push_back(next);
                                          });
      }
    }
    begin = end;
  }
  return states;
}

khop::GameParams standard_params(int k) {
  std::vector<khop::Revenue> r;
  for (int i = 0; i <= k; ++i) r.push_back(8 - 2 * i);
  return khop::GameParams::make(k, r);
}

}  // namespace oracle
