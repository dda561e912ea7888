#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "gsgan/graph.hpp"
#include "gsgan/rng.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

/// Symmetric pair counts; each unordered pair is stored once.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(std::size_t node_count = 0) : node_count_(node_count) {}

  void add(const Edge& e, std::uint64_t n = 1) {
    if (e.degenerate() || n == 0) return;
    if (e.u < 0 || static_cast<std::size_t>(e.v) >= node_count_) throw std::out_of_range("pair outside node range");
    counts_[e] += n;
    total_ += n;
  }

  std::uint64_t count(const Edge& e) const {
    auto it = counts_.find(e);
    return it == counts_.end() ? 0 : it->second;
  }

  const std::map<Edge, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  std::size_t node_count() const { return node_count_; }
  bool empty() const { return counts_.empty(); }

 private:
  std::size_t node_count_;
  std::map<Edge, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Counts non-degenerate consecutive pairs. With node_count 0 the node range
/// is taken from the largest id seen.
inline ScoreMatrix count_edges(std::span<const RandomWalk> walks, std::size_t node_count = 0) {
  if (walks.empty()) throw std::invalid_argument("no walks to count");
  if (node_count == 0) {
    for (const auto& w : walks)
      for (NodeId v : w.nodes) node_count = std::max(node_count, static_cast<std::size_t>(v) + 1);
  }
  ScoreMatrix s(node_count);
  for (const auto& w : walks)
    for (const auto& step : walk_edges(w))
      if (step.valid) s.add(step.pair);
  return s;
}

/// p_ij = S_ij / Σ S.
inline std::map<Edge, double> edge_probabilities(const ScoreMatrix& s) {
  if (s.total() == 0) throw std::invalid_argument("score matrix is empty");
  std::map<Edge, double> p;
  const double total = static_cast<double>(s.total());
  for (const auto& [e, c] : s.counts()) p.emplace(e, static_cast<double>(c) / total);
  return p;
}

struct AssemblyBudget {
  std::size_t edges = 1;

  /// ceil(ratio * |E| / 100), at least 1.
  static AssemblyBudget from_ratio(double ratio_percent, std::size_t original_edges) {
    if (!(ratio_percent > 0.0) || ratio_percent > 100.0)
      throw std::invalid_argument("ratio must lie in (0, 100]");
    // Products such as 0.1 * 7850 can land a hair above an integer.
    const double raw = ratio_percent * static_cast<double>(original_edges) / 100.0;
    auto d = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return {std::max<std::size_t>(d, 1)};
  }
};

enum class GrowthMode { Argmax, Sample };

struct AssemblyOptions {
  /// When set, pairs that are not edges of this graph are never selected.
  const Graph* original_filter = nullptr;
  /// Graph against which artificial edges are counted in the report.
  const Graph* reference = nullptr;
  GrowthMode growth = GrowthMode::Argmax;
  std::uint64_t growth_seed = 0;
};

struct AssemblyReport {
  std::size_t budget = 0;
  std::size_t eligible_pairs = 0;
  std::size_t phase1_edges = 0;
  std::size_t zero_row_nodes = 0;  // nodes skipped in phase 1
  std::size_t isolated_nodes = 0;  // nodes without edges in the result
  std::size_t artificial_edges = 0;
  std::size_t shortfall = 0;  // budget - edges when too few eligible pairs
};

struct AssemblyResult {
  Graph graph;
  AssemblyReport report;
};

/// Number of edges of `g` that are absent from `original`.
inline std::size_t count_artificial_edges(const Graph& g, const Graph& original) {
  std::size_t n = 0;
  for (const Edge& e : g.edges()) {
    const bool inside = static_cast<std::size_t>(e.v) < original.node_count();
    if (!inside || !original.has_edge(e)) ++n;
  }
  return n;
}

/// Builds a graph with `budget.edges` edges from pair counts:
/// phase 1 links every node to its most frequent partner, phase 2 adds the
/// most frequent unused pairs, phase 3 removes the least frequent present
/// pairs. Ties go to the lexicographically smallest pair.
inline AssemblyResult assemble(const ScoreMatrix& s, AssemblyBudget budget, const AssemblyOptions& opts = {}) {
  if (s.empty()) throw std::invalid_argument("score matrix is empty");
  if (budget.edges < 1) throw std::invalid_argument("edge budget must be >= 1");
  const std::size_t n = s.node_count();

  auto eligible = [&](const Edge& e) {
    if (!opts.original_filter) return true;
    const Graph& o = *opts.original_filter;
    return static_cast<std::size_t>(e.v) < o.node_count() && o.has_edge(e);
  };

  // Eligible pairs by descending count, then lexicographic pair.
  std::vector<std::pair<Edge, std::uint64_t>> ranked;
  for (const auto& [e, c] : s.counts())
    if (c > 0 && eligible(e)) ranked.emplace_back(e, c);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  AssemblyResult res;
  res.report.budget = budget.edges;
  res.report.eligible_pairs = ranked.size();

  // Row-wise argmax: the first partner seen in ranked order has the highest
  // count and, among equal counts, the smallest pair (and so smallest j).
  std::vector<std::optional<Edge>> best(n);
  for (const auto& [e, c] : ranked) {
    if (!best[static_cast<std::size_t>(e.u)]) best[static_cast<std::size_t>(e.u)] = e;
    if (!best[static_cast<std::size_t>(e.v)]) best[static_cast<std::size_t>(e.v)] = e;
  }
  std::set<Edge> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i])
      chosen.insert(*best[i]);
    else
      ++res.report.zero_row_nodes;
  }
  res.report.phase1_edges = chosen.size();

  if (chosen.size() < budget.edges) {
    if (opts.growth == GrowthMode::Argmax) {
      for (const auto& [e, c] : ranked) {
        if (chosen.size() >= budget.edges) break;
        chosen.insert(e);
      }
    } else {
      std::vector<std::pair<Edge, std::uint64_t>> pool;
      for (const auto& rc : ranked)
        if (!chosen.contains(rc.first)) pool.push_back(rc);
      std::sort(pool.begin(), pool.end());
      Rng rng(opts.growth_seed);
      while (chosen.size() < budget.edges && !pool.empty()) {
        std::uint64_t total = 0;
        for (const auto& rc : pool) total += rc.second;
        std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
        std::uint64_t r = pick(rng);
        std::size_t k = 0;
        while (r >= pool[k].second) r -= pool[k++].second;
        chosen.insert(pool[k].first);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
      }
    }
  }

  if (chosen.size() > budget.edges) {
    std::vector<std::pair<Edge, std::uint64_t>> present;
    for (const Edge& e : chosen) present.emplace_back(e, s.count(e));
    std::stable_sort(present.begin(), present.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    for (std::size_t k = 0; chosen.size() > budget.edges; ++k) chosen.erase(present[k].first);
  }

  res.graph = Graph::from_edges(n, std::vector<Edge>(chosen.begin(), chosen.end()));
  res.report.shortfall = budget.edges - res.graph.edge_count();
  for (std::size_t i = 0; i < n; ++i)
    if (res.graph.degree(static_cast<NodeId>(i)) == 0) ++res.report.isolated_nodes;
  if (const Graph* ref = opts.reference ? opts.reference : opts.original_filter)
    res.report.artificial_edges = count_artificial_edges(res.graph, *ref);
  return res;
}

}  // namespace gsgan
