#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gsgan {

using NodeId = std::int32_t;

/// Thrown for malformed inputs, unreadable files and violated preconditions
/// that originate outside the library (files, CLI arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unordered node pair, always stored with `u < v` unless degenerate.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  bool degenerate() const { return u == v; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.u)) << 32) |
                      static_cast<std::uint32_t>(e.v);
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

/// Immutable undirected simple graph over dense ids [0, N).
class Graph {
 public:
  Graph() = default;

  /// Builds a simple graph; self-loops and repeated pairs are dropped.
  /// Throws std::out_of_range for ids outside [0, node_count).
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges) {
    Graph g;
    g.adjacency_.resize(node_count);
    for (const Edge& e : edges) {
      if (e.u < 0 || static_cast<std::size_t>(e.v) >= node_count)
        throw std::out_of_range("edge endpoint outside node range");
    }
    std::erase_if(edges, [](const Edge& e) { return e.degenerate(); });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const Edge& e : edges) {
      g.adjacency_[e.u].push_back(e.v);
      g.adjacency_[e.v].push_back(e.u);
    }
    for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
    g.edges_ = std::move(edges);
    return g;
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Sorted edge list, each pair once with u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<NodeId>& neighbors(NodeId u) const {
    check_node(u);
    return adjacency_[static_cast<std::size_t>(u)];
  }

  std::size_t degree(NodeId u) const { return neighbors(u).size(); }

  bool has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& adj = adjacency_[static_cast<std::size_t>(u)];
    return std::binary_search(adj.begin(), adj.end(), v);
  }
  bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

  void check_node(NodeId u) const {
    if (u < 0 || static_cast<std::size_t>(u) >= adjacency_.size())
      throw std::out_of_range("node id " + std::to_string(u) + " outside [0, " +
                              std::to_string(adjacency_.size()) + ")");
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_.size() == b.adjacency_.size() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
};

/// Bijection between external node tokens and dense ids.
class NodeRelabeling {
 public:
  NodeId intern(const std::string& external) {
    auto [it, inserted] = to_dense_.try_emplace(external, static_cast<NodeId>(to_external_.size()));
    if (inserted) to_external_.push_back(external);
    return it->second;
  }

  std::optional<NodeId> find(const std::string& external) const {
    auto it = to_dense_.find(external);
    if (it == to_dense_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& external(NodeId dense) const {
    return to_external_.at(static_cast<std::size_t>(dense));
  }

  std::size_t size() const { return to_external_.size(); }

  /// Identity relabeling 0..n-1 rendered as decimal strings.
  static NodeRelabeling identity(std::size_t n) {
    NodeRelabeling r;
    for (std::size_t i = 0; i < n; ++i) r.intern(std::to_string(i));
    return r;
  }

 private:
  std::unordered_map<std::string, NodeId> to_dense_;
  std::vector<std::string> to_external_;
};

struct LoadReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::size_t warnings() const { return self_loops + duplicates; }
};

struct LoadedGraph {
  Graph graph;
  NodeRelabeling relabeling;
  LoadReport report;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Exported files declare isolated nodes on lines of this form so that a
// round trip preserves the node set; other readers see a comment.
inline constexpr std::string_view kNodeDirective = "# node ";

}  // namespace detail

/// Parses an edge list. Duplicate pairs (in either direction) and self-loops
/// are dropped and counted.
inline LoadedGraph parse_edge_list(std::istream& in) {
  LoadedGraph out;
  std::vector<Edge> edges;
  std::unordered_map<Edge, char, EdgeHash> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind(detail::kNodeDirective, 0) == 0) {
      auto toks = detail::split_ws(line.substr(detail::kNodeDirective.size()));
      if (toks.size() == 1) out.relabeling.intern(toks[0]);
      continue;
    }
    if (detail::is_blank(line)) continue;
    auto first = line.find_first_not_of(" \t");
    if (line[first] == '#') continue;
    auto toks = detail::split_ws(line);
    if (toks.size() != 2)
      throw InputError("malformed edge at line " + std::to_string(lineno) +
                       ": expected two tokens, got " + std::to_string(toks.size()));
    NodeId a = out.relabeling.intern(toks[0]);
    NodeId b = out.relabeling.intern(toks[1]);
    if (a == b) {
      ++out.report.self_loops;
      continue;
    }
    Edge e(a, b);
    if (!seen.emplace(e, 0).second) {
      ++out.report.duplicates;
      continue;
    }
    edges.push_back(e);
  }
  out.graph = Graph::from_edges(out.relabeling.size(), std::move(edges));
  return out;
}

inline LoadedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read edge list '" + path + "'");
  try {
    return parse_edge_list(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_edge_list(std::ostream& out, const Graph& g, const NodeRelabeling& relabel) {
  if (relabel.size() < g.node_count())
    throw std::invalid_argument("relabeling smaller than graph");
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    if (g.degree(static_cast<NodeId>(u)) == 0)
      out << detail::kNodeDirective << relabel.external(static_cast<NodeId>(u)) << '\n';
  }
  for (const Edge& e : g.edges())
    out << relabel.external(e.u) << ' ' << relabel.external(e.v) << '\n';
}

inline void export_edge_list(const Graph& g, const NodeRelabeling& relabel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list '" + path + "'");
  write_edge_list(out, g, relabel);
  if (!out) throw InputError("write failed for '" + path + "'");
}

/// Induced subgraph on N(u) ∪ N(v). Endpoints are members only when they are
/// adjacent to the other endpoint. Returns the subgraph with compact ids.
inline Graph neighborhood_union_subgraph(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  std::vector<NodeId> members;
  members.reserve(nu.size() + nv.size());
  std::set_union(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(members));

  std::vector<Edge> sub;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& adj = g.neighbors(members[i]);
    // members and adj are both sorted; only pairs with j > i are collected
    auto it = std::upper_bound(members.begin(), members.end(), members[i]);
    auto a = adj.begin();
    for (; it != members.end(); ++it) {
      a = std::lower_bound(a, adj.end(), *it);
      if (a == adj.end()) break;
      if (*a == *it)
        sub.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(it - members.begin()));
    }
  }
  return Graph::from_edges(members.size(), std::move(sub));
}

/// 2|E| / (|V|(|V|-1)); 1 for graphs with at most one node.
inline double subgraph_density(const Graph& sub) {
  const double n = static_cast<double>(sub.node_count());
  if (sub.node_count() <= 1) return 1.0;
  return 2.0 * static_cast<double>(sub.edge_count()) / (n * (n - 1.0));
}

}  // namespace gsgan
