#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsgan/graph.hpp"

namespace gsgan {

/// Community label per node; labels are opaque.
struct Partition {
  std::vector<std::int64_t> labels;

  std::size_t size() const { return labels.size(); }

  static Partition singletons(std::size_t n) {
    Partition p;
    p.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.labels[i] = static_cast<std::int64_t>(i);
    return p;
  }

  static Partition single_block(std::size_t n) { return Partition{std::vector<std::int64_t>(n, 0)}; }

  std::size_t community_count() const {
    std::vector<std::int64_t> s = labels;
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
  }

  /// Relabels communities 0..k-1 in order of first appearance.
  Partition normalized() const {
    std::unordered_map<std::int64_t, std::int64_t> map;
    Partition out;
    out.labels.reserve(labels.size());
    for (auto l : labels) out.labels.push_back(map.try_emplace(l, static_cast<std::int64_t>(map.size())).first->second);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Reads "node label" lines. Nodes unknown to `relabel` are interned (they
/// become isolated nodes of the graph); a node listed twice keeps its first
/// label. Nodes without a label get a fresh singleton label.
inline Partition load_labels(const std::string& path, NodeRelabeling& relabel) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read label file '" + path + "'");
  std::map<std::string, std::int64_t> label_ids;
  std::unordered_map<NodeId, std::int64_t> assigned;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;
    auto toks = detail::split_ws(line);
    if (toks.size() != 2)
      throw InputError(path + ": malformed label at line " + std::to_string(lineno));
    NodeId u = relabel.intern(toks[0]);
    auto lid = label_ids.try_emplace(toks[1], static_cast<std::int64_t>(label_ids.size())).first->second;
    assigned.try_emplace(u, lid);
  }
  Partition p;
  p.labels.resize(relabel.size());
  std::int64_t fresh = static_cast<std::int64_t>(label_ids.size());
  for (std::size_t u = 0; u < relabel.size(); ++u) {
    auto it = assigned.find(static_cast<NodeId>(u));
    p.labels[u] = it != assigned.end() ? it->second : fresh++;
  }
  return p;
}

inline void write_labels(std::ostream& out, const Partition& p, const NodeRelabeling& relabel) {
  for (std::size_t u = 0; u < p.size(); ++u) out << relabel.external(static_cast<NodeId>(u)) << ' ' << p.labels[u] << '\n';
}

/// Pads `g` with isolated nodes up to `n` nodes.
inline Graph with_node_count(const Graph& g, std::size_t n) {
  if (n <= g.node_count()) return g;
  return Graph::from_edges(n, g.edges());
}

struct ContingencyTable {
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> cells;
  std::map<std::int64_t, std::uint64_t> rows;
  std::map<std::int64_t, std::uint64_t> cols;
  std::uint64_t total = 0;

  static ContingencyTable of(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw std::invalid_argument("partitions cover different node sets");
    ContingencyTable t;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++t.cells[{a.labels[i], b.labels[i]}];
      ++t.rows[a.labels[i]];
      ++t.cols[b.labels[i]];
      ++t.total;
    }
    return t;
  }
};

namespace detail {
inline __int128 choose2(std::uint64_t n) { return static_cast<__int128>(n) * (static_cast<__int128>(n) - 1) / 2; }
}  // namespace detail

/// Adjusted Rand Index; 0 when the chance-corrected denominator vanishes.
/// Pair counts are combined in integers so the result is rounded once.
inline double ari(const Partition& a, const Partition& b) {
  const auto t = ContingencyTable::of(a, b);
  __int128 cells = 0;
  __int128 rows = 0;
  __int128 cols = 0;
  for (const auto& [k, n] : t.cells) cells += detail::choose2(n);
  for (const auto& [k, n] : t.rows) rows += detail::choose2(n);
  for (const auto& [k, n] : t.cols) cols += detail::choose2(n);
  const __int128 pairs = detail::choose2(t.total);
  // (cells - rows*cols/pairs) / ((rows+cols)/2 - rows*cols/pairs), scaled by 2*pairs
  const __int128 num = 2 * (pairs * cells - rows * cols);
  const __int128 den = pairs * (rows + cols) - 2 * rows * cols;
  if (pairs == 0 || den == 0) return 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

/// Newman modularity Σ_c [e_c/m - (deg_c / 2m)^2]; 0 for an edgeless graph.
inline double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.node_count()) throw std::invalid_argument("partition does not cover the graph");
  const double m = static_cast<double>(g.edge_count());
  if (m == 0.0) return 0.0;
  std::unordered_map<std::int64_t, double> inside;
  std::unordered_map<std::int64_t, double> degree;
  for (const Edge& e : g.edges())
    if (p.labels[e.u] == p.labels[e.v]) inside[p.labels[e.u]] += 1.0;
  for (std::size_t u = 0; u < g.node_count(); ++u)
    degree[p.labels[u]] += static_cast<double>(g.degree(static_cast<NodeId>(u)));
  // Sum in label order so the result does not depend on hash iteration.
  std::map<std::int64_t, double> ordered(degree.begin(), degree.end());
  double q = 0.0;
  for (const auto& [c, dc] : ordered) {
    const double ec = inside.count(c) ? inside.at(c) : 0.0;
    q += ec / m - (dc / (2.0 * m)) * (dc / (2.0 * m));
  }
  return q;
}

}  // namespace gsgan
