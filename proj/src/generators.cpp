#include "khop/generators.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "khop/error.hpp"

namespace khop {
namespace {

GraphBuilder labelled_nodes(std::size_t n, double theta) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.node(std::to_string(i), theta);
  return b;
}

std::pair<NodeId, NodeId> ordered(NodeId u, NodeId v) { return u < v ? std::pair{u, v} : std::pair{v, u}; }

}  // namespace

Graph erdos_renyi_gnm(std::size_t n, std::size_t m, double p, double theta, Rng& rng) {
  if (n < 2 && m > 0) throw ValidationError("G(n,m) needs at least two nodes");
  if (m > n * (n - 1) / 2) throw ValidationError("G(n,m): too many edges");
  GraphBuilder b = labelled_nodes(n, theta);
  std::set<std::pair<NodeId, NodeId>> seen;
  while (seen.size() < m) {
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    const auto v = static_cast<NodeId>(rng.uniform_index(n));
    if (u == v || !seen.insert(ordered(u, v)).second) continue;
    b.add_edge(u, v, p);
  }
  return b.build();
}

Graph preferential_attachment(std::size_t n, std::size_t attach, bool half_step, double p,
                              double theta, Rng& rng) {
  const std::size_t m0 = attach + 1;
  if (n < m0 + 1) throw ValidationError("preferential attachment needs n > attach + 1");
  GraphBuilder b = labelled_nodes(n, theta);
  std::vector<NodeId> ends;  // each node repeated once per incident edge
  for (NodeId u = 0; u < m0; ++u) {
    for (NodeId v = u + 1; v < m0; ++v) {
      b.add_edge(u, v, p);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  for (auto t = static_cast<NodeId>(m0); t < n; ++t) {
    const std::size_t want = half_step && (t % 2 == 1) ? attach + 1 : attach;
    std::set<NodeId> targets;
    while (targets.size() < std::min<std::size_t>(want, t)) {
      targets.insert(ends[rng.uniform_index(ends.size())]);
    }
    for (NodeId v : targets) {
      b.add_edge(t, v, p);
      ends.push_back(t);
      ends.push_back(v);
    }
  }
  return b.build();
}

Graph ring_with_chords(std::size_t n, std::size_t ring_degree, std::size_t extra, double p,
                       double theta, Rng& rng) {
  if (ring_degree % 2 != 0 || ring_degree >= n) throw ValidationError("ring degree must be even and < n");
  GraphBuilder b = labelled_nodes(n, theta);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= ring_degree / 2; ++j) {
      const auto v = static_cast<NodeId>((u + j) % n);
      if (seen.insert(ordered(u, v)).second) b.add_edge(u, v, p);
    }
  }
  const std::size_t target = seen.size() + extra;
  if (target > n * (n - 1) / 2) throw ValidationError("ring_with_chords: too many chords");
  while (seen.size() < target) {
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    const auto v = static_cast<NodeId>(rng.uniform_index(n));
    if (u == v || !seen.insert(ordered(u, v)).second) continue;
    b.add_edge(u, v, p);
  }
  return b.build();
}

}  // namespace khop
