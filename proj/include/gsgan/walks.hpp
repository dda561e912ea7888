#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsgan/graph.hpp"
#include "gsgan/rng.hpp"

namespace gsgan {

/// Fixed-length node sequence. Walks sampled from a graph follow its edges;
/// generated walks need not.
struct RandomWalk {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.size(); }
  friend bool operator==(const RandomWalk&, const RandomWalk&) = default;
};

struct GraphFingerprint {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  static GraphFingerprint of(const Graph& g) { return {g.node_count(), g.edge_count()}; }
  friend bool operator==(const GraphFingerprint&, const GraphFingerprint&) = default;
};

struct WalkCorpus {
  std::vector<RandomWalk> walks;
  GraphFingerprint source;
  std::uint64_t seed = 0;

  std::size_t walk_length() const { return walks.empty() ? 0 : walks.front().length(); }
};

/// True iff every consecutive pair of `w` is an edge of `g`.
inline bool is_real_walk(const Graph& g, const RandomWalk& w) {
  for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) {
    if (w.nodes[i] < 0 || static_cast<std::size_t>(w.nodes[i]) >= g.node_count()) return false;
    if (w.nodes[i + 1] < 0 || static_cast<std::size_t>(w.nodes[i + 1]) >= g.node_count()) return false;
    if (!g.has_edge(w.nodes[i], w.nodes[i + 1])) return false;
  }
  return true;
}

/// Nodes with at least one incident edge, ascending. Walk starts are drawn
/// uniformly from this set.
inline std::vector<NodeId> walk_start_nodes(const Graph& g) {
  std::vector<NodeId> out;
  for (std::size_t u = 0; u < g.node_count(); ++u)
    if (g.degree(static_cast<NodeId>(u)) > 0) out.push_back(static_cast<NodeId>(u));
  return out;
}

namespace detail {

inline RandomWalk walk_from(const Graph& g, NodeId start, std::size_t length, Rng& rng) {
  RandomWalk w;
  w.nodes.reserve(length);
  w.nodes.push_back(start);
  while (w.nodes.size() < length) {
    const auto& adj = g.neighbors(w.nodes.back());
    std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
    w.nodes.push_back(adj[pick(rng)]);
  }
  return w;
}

inline void check_walk_args(const Graph& g, std::size_t length) {
  if (length < 2) throw std::invalid_argument("walk length must be at least 2");
  if (g.edge_count() == 0) throw std::invalid_argument("cannot sample walks from a graph without edges");
}

}  // namespace detail

/// First-order uniform random walk of `length` nodes.
inline RandomWalk sample_walk(const Graph& g, std::size_t length, Rng& rng) {
  detail::check_walk_args(g, length);
  const auto starts = walk_start_nodes(g);
  std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
  return detail::walk_from(g, starts[pick(rng)], length, rng);
}

inline WalkCorpus sample_corpus(const Graph& g, std::size_t count, std::size_t length, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("corpus size must be at least 1");
  detail::check_walk_args(g, length);
  const auto starts = walk_start_nodes(g);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
  WalkCorpus corpus;
  corpus.source = GraphFingerprint::of(g);
  corpus.seed = seed;
  corpus.walks.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    corpus.walks.push_back(detail::walk_from(g, starts[pick(rng)], length, rng));
  return corpus;
}

/// Consecutive pair of a walk. `valid` is false when both ends coincide.
struct WalkStep {
  Edge pair;
  bool valid = true;
  friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

inline std::vector<WalkStep> walk_edges(const RandomWalk& w) {
  std::vector<WalkStep> out;
  if (w.nodes.size() < 2) return out;
  out.reserve(w.nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) {
    Edge e(w.nodes[i], w.nodes[i + 1]);
    out.push_back({e, !e.degenerate()});
  }
  return out;
}

// One walk per line, space-separated dense ids.
inline void write_corpus(std::ostream& out, const WalkCorpus& corpus) {
  for (const auto& w : corpus.walks) {
    for (std::size_t i = 0; i < w.nodes.size(); ++i) out << (i ? " " : "") << w.nodes[i];
    out << '\n';
  }
}

inline WalkCorpus read_corpus(std::istream& in, const GraphFingerprint& source) {
  WalkCorpus corpus;
  corpus.source = source;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ls(line);
    RandomWalk w;
    long long id = 0;
    while (ls >> id) {
      if (id < 0 || static_cast<std::size_t>(id) >= source.node_count)
        throw InputError("walk node out of range at line " + std::to_string(lineno));
      w.nodes.push_back(static_cast<NodeId>(id));
    }
    if (!ls.eof()) throw InputError("malformed walk at line " + std::to_string(lineno));
    if (!corpus.walks.empty() && w.length() != corpus.walk_length())
      throw InputError("walk length mismatch at line " + std::to_string(lineno));
    corpus.walks.push_back(std::move(w));
  }
  return corpus;
}

}  // namespace gsgan
