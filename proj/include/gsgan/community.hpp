#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsgan/graph.hpp"
#include "gsgan/partition.hpp"
#include "gsgan/rng.hpp"

namespace gsgan {

namespace detail {

// Weighted multigraph used by the Louvain aggregation levels.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self;                                      // self-loop weight
  std::vector<double> strength;                                  // Σ w_ij + 2 self_i

  std::size_t size() const { return adj.size(); }

  static WeightedGraph of(const Graph& g) {
    WeightedGraph w;
    const std::size_t n = g.node_count();
    w.adj.resize(n);
    w.self.assign(n, 0.0);
    w.strength.assign(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      for (NodeId v : g.neighbors(static_cast<NodeId>(u))) w.adj[u].emplace_back(static_cast<std::size_t>(v), 1.0);
      w.strength[u] = static_cast<double>(g.degree(static_cast<NodeId>(u)));
    }
    return w;
  }
};

// One round of local moving; returns whether any node changed community.
inline bool louvain_local_moving(const WeightedGraph& wg, std::vector<std::size_t>& comm, double two_m, Rng& rng) {
  const std::size_t n = wg.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += wg.strength[i];
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const double ki = wg.strength[i];
      const std::size_t old = comm[i];
      touched.clear();
      for (const auto& [j, w] : wg.adj[i]) {
        const std::size_t c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[old] -= ki;
      std::size_t best = old;
      double best_gain = link[old] - tot[old] * ki / two_m;
      for (std::size_t c : touched) {
        const double gain = link[c] - tot[c] * ki / two_m;
        if (gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += ki;
      comm[i] = best;
      for (std::size_t c : touched) link[c] = 0.0;
      if (best != old) {
        moved = true;
        any = true;
      }
    }
  }
  return any;
}

inline WeightedGraph louvain_aggregate(const WeightedGraph& wg, const std::vector<std::size_t>& comm,
                                       std::size_t k) {
  WeightedGraph out;
  out.adj.resize(k);
  out.self.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  std::vector<std::map<std::size_t, double>> links(k);
  for (std::size_t i = 0; i < wg.size(); ++i) {
    const std::size_t ci = comm[i];
    out.self[ci] += wg.self[i];
    out.strength[ci] += wg.strength[i];
    for (const auto& [j, w] : wg.adj[i]) {
      const std::size_t cj = comm[j];
      if (ci == cj) {
        out.self[ci] += 0.5 * w;  // each internal edge is seen from both ends
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c)
    for (const auto& [d, w] : links[c]) out.adj[c].emplace_back(d, w);
  return out;
}

}  // namespace detail

/// Louvain modularity optimization: seeded local moving followed by
/// community aggregation, repeated while nodes keep moving.
inline Partition louvain(const Graph& g, Rng& rng) {
  const std::size_t n = g.node_count();
  if (g.edge_count() == 0) return Partition::singletons(n);
  const double two_m = 2.0 * static_cast<double>(g.edge_count());

  detail::WeightedGraph level = detail::WeightedGraph::of(g);
  std::vector<std::size_t> membership(n);
  for (std::size_t i = 0; i < n; ++i) membership[i] = i;

  while (true) {
    std::vector<std::size_t> comm(level.size());
    for (std::size_t i = 0; i < comm.size(); ++i) comm[i] = i;
    if (!detail::louvain_local_moving(level, comm, two_m, rng)) break;
    // compact community ids in order of first appearance
    std::vector<std::size_t> remap(level.size(), SIZE_MAX);
    std::size_t k = 0;
    for (auto& c : comm) {
      if (remap[c] == SIZE_MAX) remap[c] = k++;
      c = remap[c];
    }
    for (auto& m : membership) m = comm[m];
    if (k == level.size()) break;
    level = detail::louvain_aggregate(level, comm, k);
  }
  Partition p;
  p.labels.assign(membership.begin(), membership.end());
  return p;
}

inline constexpr std::size_t kLabelPropagationMaxSweeps = 100;

/// Asynchronous label propagation. A node keeps its label while that label
/// is among the most frequent in its neighborhood; otherwise it adopts one of
/// the most frequent labels at random.
inline Partition label_propagation(const Graph& g, Rng& rng, std::size_t max_sweeps = kLabelPropagationMaxSweeps) {
  const std::size_t n = g.node_count();
  Partition p = Partition::singletons(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<std::uint32_t> freq(n, 0);
  std::vector<std::int64_t> touched;
  std::vector<std::int64_t> top;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (std::size_t u : order) {
      const auto& adj = g.neighbors(static_cast<NodeId>(u));
      if (adj.empty()) continue;
      touched.clear();
      std::uint32_t best = 0;
      for (NodeId v : adj) {
        const auto l = p.labels[static_cast<std::size_t>(v)];
        if (freq[static_cast<std::size_t>(l)]++ == 0) touched.push_back(l);
        best = std::max(best, freq[static_cast<std::size_t>(l)]);
      }
      const auto current = p.labels[u];
      const bool keep = freq[static_cast<std::size_t>(current)] == best;
      if (!keep) {
        top.clear();
        for (auto l : touched)
          if (freq[static_cast<std::size_t>(l)] == best) top.push_back(l);
        std::sort(top.begin(), top.end());
        std::uniform_int_distribution<std::size_t> pick(0, top.size() - 1);
        p.labels[u] = top[pick(rng)];
        changed = true;
      }
      for (auto l : touched) freq[static_cast<std::size_t>(l)] = 0;
    }
    if (!changed) break;
  }
  return p;
}

/// Agglomerative modularity maximization: repeatedly merges the adjacent
/// community pair with the largest positive gain (ties: smallest pair);
/// the merged community keeps the smaller label.
inline Partition greedy_modularity(const Graph& g) {
  const std::size_t n = g.node_count();
  if (g.edge_count() == 0) return Partition::singletons(n);
  const double m = static_cast<double>(g.edge_count());

  std::vector<std::map<std::size_t, double>> links(n);
  std::vector<double> strength(n, 0.0);
  for (const Edge& e : g.edges()) {
    links[e.u][e.v] += 1.0;
    links[e.v][e.u] += 1.0;
  }
  for (std::size_t u = 0; u < n; ++u) strength[u] = static_cast<double>(g.degree(static_cast<NodeId>(u)));
  std::vector<std::uint32_t> version(n, 0);
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;

  using Entry = std::tuple<double, std::size_t, std::size_t, std::uint32_t, std::uint32_t>;
  auto worse = [](const Entry& a, const Entry& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<2>(a) > std::get<2>(b);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  auto gain = [&](std::size_t i, std::size_t j, double w) { return w / m - strength[i] * strength[j] / (2.0 * m * m); };
  auto push = [&](std::size_t i, std::size_t j, double w) {
    if (i > j) std::swap(i, j);
    heap.emplace(gain(i, j, w), i, j, version[i], version[j]);
  };
  for (const Edge& e : g.edges()) push(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v), 1.0);

  while (!heap.empty()) {
    auto [dq, i, j, vi, vj] = heap.top();
    heap.pop();
    if (!alive[i] || !alive[j] || version[i] != vi || version[j] != vj) continue;
    if (!(dq > 0.0)) break;
    // merge j into i (i < j)
    for (const auto& [k, w] : links[j]) {
      if (k == i) continue;
      links[i][k] += w;
      auto& lk = links[k];
      lk[i] += w;
      lk.erase(j);
    }
    links[i].erase(j);
    links[j].clear();
    strength[i] += strength[j];
    alive[j] = false;
    parent[j] = i;
    ++version[i];
    for (const auto& [k, w] : links[i]) push(i, k, w);
  }

  Partition p;
  p.labels.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::size_t r = u;
    while (parent[r] != r) r = parent[r];
    p.labels[u] = static_cast<std::int64_t>(r);
  }
  return p;
}

enum class DetectionAlgorithm { Louvain, LabelPropagation, Greedy };

inline std::string_view to_string(DetectionAlgorithm a) {
  switch (a) {
    case DetectionAlgorithm::Louvain: return "louvain";
    case DetectionAlgorithm::LabelPropagation: return "labelprop";
    case DetectionAlgorithm::Greedy: return "greedy";
  }
  return "?";
}

inline DetectionAlgorithm parse_detection_algorithm(std::string_view s) {
  if (s == "louvain") return DetectionAlgorithm::Louvain;
  if (s == "labelprop") return DetectionAlgorithm::LabelPropagation;
  if (s == "greedy") return DetectionAlgorithm::Greedy;
  throw InputError("unknown detection algorithm '" + std::string(s) + "'");
}

inline Partition detect(const Graph& g, DetectionAlgorithm algo, std::uint64_t seed) {
  Rng rng(seed);
  switch (algo) {
    case DetectionAlgorithm::Louvain: return louvain(g, rng);
    case DetectionAlgorithm::LabelPropagation: return label_propagation(g, rng);
    case DetectionAlgorithm::Greedy: return greedy_modularity(g);
  }
  return Partition::singletons(g.node_count());
}

/// Runs `f` and measures its wall-clock duration on a monotonic clock.
template <class F>
auto timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  const auto stop = std::chrono::steady_clock::now();
  return std::make_pair(std::move(result), std::chrono::duration<double>(stop - start).count());
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace gsgan
