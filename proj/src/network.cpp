#include "khop/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "khop/error.hpp"
#include "khop/rng.hpp"

namespace khop {
namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << " " << p << " outside [0,1]";
    throw ValidationError(msg.str());
  }
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_comment_or_blank(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().front() == '#' || tokens.front().front() == '%';
}

double parse_double(std::string_view token, const std::string& source, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(source, line, "expected a decimal number, got '" + std::string(token) + "'");
  }
  return value;
}

/// Runs `fn(tokens, line_number)` for every non-comment line.
template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = tokenize(line);
    if (is_comment_or_blank(tokens)) continue;
    fn(tokens, line_no);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

bool label_less(const std::string& a, const std::string& b) {
  long long x = 0, y = 0;
  auto [pa, ea] = std::from_chars(a.data(), a.data() + a.size(), x);
  auto [pb, eb] = std::from_chars(b.data(), b.data() + b.size(), y);
  const bool a_int = ea == std::errc() && pa == a.data() + a.size();
  const bool b_int = eb == std::errc() && pb == b.data() + b.size();
  if (a_int && b_int && x != y) return x < y;
  return a < b;
}

}  // namespace

// --- Graph ---------------------------------------------------------------

void Graph::check_node(NodeId u) const {
  if (u >= labels_.size()) {
    throw LookupError("unknown node index " + std::to_string(u));
  }
}

const std::string& Graph::label(NodeId u) const {
  check_node(u);
  return labels_[u];
}

NodeId Graph::id_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw LookupError("unknown node '" + std::string(label) + "'");
  return it->second;
}

bool Graph::contains(std::string_view label) const {
  return index_.contains(std::string(label));
}

std::span<const Adjacency> Graph::adjacency(NodeId u) const {
  check_node(u);
  return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
}

std::int64_t Graph::find_edge(NodeId u, NodeId v) const {
  auto adj_u = adjacency(u);
  auto adj_v = adjacency(v);
  const auto& scan = adj_u.size() <= adj_v.size() ? adj_u : adj_v;
  const NodeId target = adj_u.size() <= adj_v.size() ? v : u;
  for (const auto& a : scan) {
    if (a.node == target) return a.edge;
  }
  return -1;
}

Graph Graph::with_accept_probs(std::vector<double> theta) const {
  if (theta.size() != node_count()) {
    throw ValidationError("acceptance vector has " + std::to_string(theta.size()) +
                          " entries, graph has " + std::to_string(node_count()) + " nodes");
  }
  for (double t : theta) check_probability(t, "acceptance probability");
  Graph copy = *this;
  copy.accept_prob_ = std::move(theta);
  return copy;
}

Graph Graph::with_edge_probs(double p) const {
  check_probability(p, "edge probability");
  Graph copy = *this;
  std::fill(copy.edge_prob_.begin(), copy.edge_prob_.end(), p);
  return copy;
}

void Graph::write_node_map(std::ostream& out) const {
  for (NodeId u = 0; u < labels_.size(); ++u) out << u << ' ' << labels_[u] << '\n';
}

// --- GraphBuilder --------------------------------------------------------

NodeId GraphBuilder::node(std::string_view label, double default_theta) {
  std::string key(label);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  check_probability(default_theta, "acceptance probability");
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(key);
  index_.emplace(std::move(key), id);
  theta_.push_back(default_theta);
  return id;
}

EdgeId GraphBuilder::add_edge(std::string_view u, std::string_view v, double p) {
  if (u == v) throw ValidationError("self-loop on node '" + std::string(u) + "'");
  const NodeId a = node(u);
  const NodeId b = node(v);
  return add_edge(a, b, p);
}

EdgeId GraphBuilder::add_edge(NodeId u, NodeId v, double p) {
  if (u >= labels_.size() || v >= labels_.size()) throw LookupError("edge endpoint not a node");
  if (u == v) throw ValidationError("self-loop on node '" + labels_[u] + "'");
  check_probability(p, "edge probability");
  const auto key = pair_key(u, v);
  if (edge_index_.contains(key)) {
    throw ValidationError("duplicate edge " + labels_[u] + " " + labels_[v]);
  }
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.emplace_back(std::min(u, v), std::max(u, v));
  probs_.push_back(p);
  edge_index_.emplace(key, id);
  return id;
}

void GraphBuilder::set_accept_prob(NodeId u, double theta) {
  check_probability(theta, "acceptance probability");
  theta_.at(u) = theta;
}

Graph GraphBuilder::build() const {
  Graph g;
  g.labels_ = labels_;
  g.index_ = index_;
  g.endpoints_ = edges_;
  g.edge_prob_ = probs_;
  g.accept_prob_ = theta_;

  const std::size_t n = labels_.size();
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : edges_) {
    ++degree[u];
    ++degree[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + degree[u];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    auto [u, v] = edges_[e];
    g.adjacency_[cursor[u]++] = {v, e};
    g.adjacency_[cursor[v]++] = {u, e};
  }
  return g;
}

// --- CommunityStructure ---------------------------------------------------

CommunityStructure::CommunityStructure(const Graph& graph,
                                       std::vector<std::vector<NodeId>> communities,
                                       std::vector<std::string> labels)
    : members_(std::move(communities)), labels_(std::move(labels)) {
  constexpr auto kUnassigned = std::numeric_limits<std::size_t>::max();
  owner_.assign(graph.node_count(), kUnassigned);
  if (labels_.empty()) {
    for (std::size_t i = 0; i < members_.size(); ++i) labels_.push_back(std::to_string(i + 1));
  }
  if (labels_.size() != members_.size()) {
    throw ValidationError("community label count does not match community count");
  }
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].empty()) throw ValidationError("community " + labels_[i] + " is empty");
    for (NodeId u : members_[i]) {
      if (u >= graph.node_count()) throw ValidationError("community member is not a graph node");
      if (owner_[u] != kUnassigned) {
        throw ValidationError("node '" + graph.label(u) + "' belongs to two communities");
      }
      owner_[u] = i;
    }
  }
  for (NodeId u = 0; u < owner_.size(); ++u) {
    if (owner_[u] == kUnassigned) {
      throw ValidationError("node '" + graph.label(u) + "' has no community");
    }
  }
}

CommunityStructure CommunityStructure::single(const Graph& graph) {
  if (graph.node_count() == 0) return {};
  std::vector<NodeId> all(graph.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  return CommunityStructure(graph, {std::move(all)}, {"1"});
}

std::vector<std::size_t> CommunityStructure::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(members_.size());
  for (const auto& c : members_) out.push_back(c.size());
  return out;
}

// --- GameParams -----------------------------------------------------------

GameParams GameParams::make(int k, std::vector<Revenue> revenue) {
  GameParams params{k, std::move(revenue)};
  params.validate();
  return params;
}

void GameParams::validate() const {
  if (k < 0) throw ValidationError("hop limit k must be non-negative");
  if (revenue.size() != static_cast<std::size_t>(k) + 1) {
    throw ValidationError("revenue vector needs k+1 = " + std::to_string(k + 1) +
                          " entries, got " + std::to_string(revenue.size()));
  }
  for (std::size_t i = 0; i < revenue.size(); ++i) {
    if (revenue[i] <= 0) throw ValidationError("revenue entries must be positive");
    if (i > 0 && revenue[i] > revenue[i - 1]) {
      throw ValidationError("revenue vector must be non-increasing");
    }
  }
}

// --- Loading --------------------------------------------------------------

ThetaMode parse_theta_mode(std::string_view text) {
  if (text == "uniform") return ThetaUniform{};
  if (text.starts_with("const:")) {
    auto rest = text.substr(6);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw ValidationError("bad theta constant '" + std::string(rest) + "'");
    }
    check_probability(v, "acceptance probability");
    return ThetaConstant{v};
  }
  if (text.starts_with("file:")) return ThetaFile{std::string(text.substr(5))};
  throw ValidationError("theta mode must be uniform, const:<v> or file:<path>, got '" +
                        std::string(text) + "'");
}

Graph read_graph(std::istream& in, const std::string& source, double default_p,
                 const ThetaMode& theta, std::uint64_t seed) {
  check_probability(default_p, "default edge probability");
  GraphBuilder builder;
  for_each_record(in, [&](const std::vector<std::string_view>& t, std::size_t line) {
    if (t.size() != 2 && t.size() != 3) {
      throw ParseError(source, line, "expected '<u> <v> [p]'");
    }
    const double p = t.size() == 3 ? parse_double(t[2], source, line) : default_p;
    try {
      builder.add_edge(t[0], t[1], p);
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(line) + ": " + e.what());
    }
  });

  const std::size_t n = builder.node_count();
  if (const auto* c = std::get_if<ThetaConstant>(&theta)) {
    check_probability(c->value, "acceptance probability");
    for (NodeId u = 0; u < n; ++u) builder.set_accept_prob(u, c->value);
  } else if (std::holds_alternative<ThetaUniform>(theta)) {
    Rng rng(seed);
    for (NodeId u = 0; u < n; ++u) builder.set_accept_prob(u, rng.uniform());
  } else {
    const auto& file = std::get<ThetaFile>(theta).path;
    auto tin = open_or_throw(file);
    Graph partial = builder.build();
    std::vector<char> seen(n, 0);
    for_each_record(tin, [&](const std::vector<std::string_view>& t, std::size_t line) {
      if (t.size() != 2) throw ParseError(file.string(), line, "expected '<node> <theta>'");
      if (!partial.contains(t[0])) {
        throw ValidationError(file.string() + ":" + std::to_string(line) + ": unknown node '" +
                              std::string(t[0]) + "'");
      }
      const NodeId u = partial.id_of(t[0]);
      const double v = parse_double(t[1], file.string(), line);
      check_probability(v, "acceptance probability");
      builder.set_accept_prob(u, v);
      seen[u] = 1;
    });
    for (NodeId u = 0; u < n; ++u) {
      if (!seen[u]) throw ValidationError("theta file has no entry for node '" + partial.label(u) + "'");
    }
  }
  return builder.build();
}

Graph load_graph(const std::filesystem::path& path, double default_p, const ThetaMode& theta,
                 std::uint64_t seed) {
  auto in = open_or_throw(path);
  return read_graph(in, path.string(), default_p, theta, seed);
}

CommunityStructure read_communities(std::istream& in, const std::string& source,
                                    const Graph& graph) {
  std::vector<std::string> label_of(graph.node_count());
  std::vector<char> seen(graph.node_count(), 0);
  for_each_record(in, [&](const std::vector<std::string_view>& t, std::size_t line) {
    if (t.size() != 2) throw ParseError(source, line, "expected '<node> <community-label>'");
    if (!graph.contains(t[0])) {
      throw ValidationError(source + ":" + std::to_string(line) + ": unknown node '" +
                            std::string(t[0]) + "'");
    }
    const NodeId u = graph.id_of(t[0]);
    if (seen[u]) {
      throw ValidationError(source + ":" + std::to_string(line) + ": node '" +
                            std::string(t[0]) + "' labelled twice");
    }
    seen[u] = 1;
    label_of[u] = std::string(t[1]);
  });
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    if (!seen[u]) throw ValidationError("node '" + graph.label(u) + "' has no community label");
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::vector<NodeId>> groups;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    auto [it, inserted] = slot.emplace(label_of[u], groups.size());
    if (inserted) {
      labels.push_back(label_of[u]);
      groups.emplace_back();
    }
    groups[it->second].push_back(u);
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (groups[a].size() != groups[b].size()) return groups[a].size() > groups[b].size();
    return label_less(labels[a], labels[b]);
  });
  std::vector<std::vector<NodeId>> sorted_groups;
  std::vector<std::string> sorted_labels;
  for (std::size_t i : order) {
    sorted_groups.push_back(std::move(groups[i]));
    sorted_labels.push_back(std::move(labels[i]));
  }
  return CommunityStructure(graph, std::move(sorted_groups), std::move(sorted_labels));
}

CommunityStructure load_communities(const std::filesystem::path& path, const Graph& graph) {
  auto in = open_or_throw(path);
  return read_communities(in, path.string(), graph);
}

// --- Queries --------------------------------------------------------------

std::vector<NodeId> neighbors(const Graph& graph, NodeId u) {
  std::vector<NodeId> out;
  for (const auto& a : graph.adjacency(u)) out.push_back(a.node);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> neighbors(const Graph& graph, std::string_view label) {
  return neighbors(graph, graph.id_of(label));
}

GraphStats graph_stats(const Graph& graph) {
  GraphStats s;
  s.nodes = graph.node_count();
  s.edges = graph.edge_count();
  s.average_degree = s.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
  return s;
}

std::vector<int> bfs_distances(const Graph& graph, NodeId source, int max_depth) {
  std::vector<int> dist(graph.node_count(), -1);
  if (max_depth < 0) return dist;
  dist.at(source) = 0;
  std::queue<NodeId> queue;
  queue.push(source);
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop();
    if (dist[x] >= max_depth) continue;
    for (const auto& a : graph.adjacency(x)) {
      if (dist[a.node] < 0) {
        dist[a.node] = dist[x] + 1;
        queue.push(a.node);
      }
    }
  }
  return dist;
}

}  // namespace khop
