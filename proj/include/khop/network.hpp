#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace khop {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Revenue = std::int64_t;

struct Adjacency {
  NodeId node;
  EdgeId edge;
};

/// Undirected social network with per-edge success probabilities (p_e) and
/// per-node acceptance probabilities (theta_u).
///
/// Node labels are opaque strings mapped to dense indices in order of first
/// appearance. A Graph is immutable once built; construct it with
/// GraphBuilder or load_graph().
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return endpoints_.size(); }

  const std::string& label(NodeId u) const;
  /// Throws LookupError for unknown labels.
  NodeId id_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  std::pair<NodeId, NodeId> endpoints(EdgeId e) const { return endpoints_.at(e); }
  double edge_prob(EdgeId e) const { return edge_prob_.at(e); }
  double accept_prob(NodeId u) const { return accept_prob_.at(u); }
  std::span<const double> accept_probs() const noexcept { return accept_prob_; }

  /// Incident (neighbor, edge) pairs of u in edge-insertion order.
  std::span<const Adjacency> adjacency(NodeId u) const;
  std::size_t degree(NodeId u) const { return adjacency(u).size(); }

  /// Edge joining u and v, or -1 when none exists.
  std::int64_t find_edge(NodeId u, NodeId v) const;

  /// Copy with a replaced acceptance vector (one entry per node, each in [0,1]).
  Graph with_accept_probs(std::vector<double> theta) const;
  /// Copy with every edge probability set to p.
  Graph with_edge_probs(double p) const;

  /// Writes `index label` lines, the dense index mapping used internally.
  void write_node_map(std::ostream& out) const;

 private:
  friend class GraphBuilder;

  void check_node(NodeId u) const;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::pair<NodeId, NodeId>> endpoints_;
  std::vector<double> edge_prob_;
  std::vector<double> accept_prob_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Adjacency> adjacency_;
};

/// Incremental Graph construction with invariant checks on every insertion.
class GraphBuilder {
 public:
  /// Returns the index of `label`, creating the node with `default_theta`
  /// if it does not exist yet.
  NodeId node(std::string_view label, double default_theta = 1.0);
  /// Throws ValidationError on self-loops, duplicates (in either endpoint
  /// order) and probabilities outside [0,1].
  EdgeId add_edge(std::string_view u, std::string_view v, double p);
  EdgeId add_edge(NodeId u, NodeId v, double p);
  void set_accept_prob(NodeId u, double theta);

  std::size_t node_count() const noexcept { return labels_.size(); }

  Graph build() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<double> theta_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<double> probs_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
};

/// Ordered partition C_1..C_r of the node set, largest community first.
class CommunityStructure {
 public:
  CommunityStructure() = default;
  /// Validates that `communities` partition the graph's nodes and none is
  /// empty. The order given is kept.
  CommunityStructure(const Graph& graph, std::vector<std::vector<NodeId>> communities,
                     std::vector<std::string> labels = {});

  /// Every node in one community.
  static CommunityStructure single(const Graph& graph);

  std::size_t size() const noexcept { return members_.size(); }
  std::span<const NodeId> members(std::size_t i) const { return members_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t community_of(NodeId u) const { return owner_.at(u); }
  std::vector<std::size_t> sizes() const;

 private:
  std::vector<std::vector<NodeId>> members_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> owner_;
};

/// Hop limit k and revenue vector R_0..R_k.
struct GameParams {
  int k = 0;
  std::vector<Revenue> revenue{1};

  /// Throws ValidationError unless revenue has k+1 positive, non-increasing
  /// entries.
  static GameParams make(int k, std::vector<Revenue> revenue);
  void validate() const;
  Revenue at(int hop) const { return revenue.at(static_cast<std::size_t>(hop)); }
};

struct ThetaConstant {
  double value = 1.0;
};
struct ThetaUniform {};
struct ThetaFile {
  std::filesystem::path path;
};
/// How acceptance probabilities are filled in when loading a graph.
using ThetaMode = std::variant<ThetaUniform, ThetaConstant, ThetaFile>;

/// Parses `uniform`, `const:<v>` or `file:<path>`.
ThetaMode parse_theta_mode(std::string_view text);

/// Reads an edge list (`<u> <v> [p]` per line, `#`/`%` comments).
/// Uniform theta sampling draws one value per node in index order from `seed`.
Graph load_graph(const std::filesystem::path& path, double default_p, const ThetaMode& theta,
                 std::uint64_t seed);
Graph read_graph(std::istream& in, const std::string& source, double default_p,
                 const ThetaMode& theta, std::uint64_t seed);

/// Reads `<node> <label>` lines. Communities are ordered by descending size,
/// ties broken by label (numeric when both labels are integers).
CommunityStructure load_communities(const std::filesystem::path& path, const Graph& graph);
CommunityStructure read_communities(std::istream& in, const std::string& source,
                                    const Graph& graph);

/// Sorted neighbor indices of u. Throws LookupError for unknown nodes.
std::vector<NodeId> neighbors(const Graph& graph, NodeId u);
std::vector<NodeId> neighbors(const Graph& graph, std::string_view label);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double average_degree = 0.0;
};

GraphStats graph_stats(const Graph& graph);

/// Hop distances from `source` over all edges regardless of state, truncated
/// at `max_depth`; -1 for nodes farther away.
std::vector<int> bfs_distances(const Graph& graph, NodeId source, int max_depth);

}  // namespace khop
