#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "gsgan/graph.hpp"
#include "gsgan/rng.hpp"
#include "gsgan/scoring.hpp"

namespace gsgan {

struct RankedEdge {
  Edge pair;
  double score = 0.0;
};

/// Edges sorted by descending score, ties by ascending pair.
class EdgeRanking {
 public:
  explicit EdgeRanking(std::vector<RankedEdge> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const RankedEdge& a, const RankedEdge& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.pair < b.pair;
    });
  }

  const std::vector<RankedEdge>& entries() const { return entries_; }

  std::vector<Edge> top(std::size_t d) const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < std::min(d, entries_.size()); ++i) out.push_back(entries_[i].pair);
    return out;
  }

 private:
  std::vector<RankedEdge> entries_;
};

namespace detail {

inline void check_budget(const Graph& g, std::size_t d) {
  if (d > g.edge_count())
    throw std::invalid_argument("budget " + std::to_string(d) + " exceeds edge count " +
                                std::to_string(g.edge_count()));
}

inline Graph subgraph_with(const Graph& g, std::vector<Edge> edges) {
  return Graph::from_edges(g.node_count(), std::move(edges));
}

}  // namespace detail

inline EdgeRanking jaccard_ranking(const Graph& g) {
  std::vector<RankedEdge> r;
  r.reserve(g.edge_count());
  for (const Edge& e : g.edges()) r.push_back({e, jaccard(g, e.u, e.v)});
  return EdgeRanking(std::move(r));
}

/// Top-d existing edges by Jaccard coefficient.
inline Graph sparsify_jc(const Graph& g, std::size_t d) {
  detail::check_budget(g, d);
  return detail::subgraph_with(g, jaccard_ranking(g).top(d));
}

/// Unnormalized edge betweenness over unordered source/target pairs,
/// accumulated per source with breadth-first search. `Scalar` needs +, *, /
/// and construction from integers; an exact rational type works as well as
/// double. Values are indexed like g.edges().
template <class Scalar = double>
std::vector<Scalar> edge_betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto& edges = g.edges();
  std::vector<Scalar> cb(edges.size(), Scalar(0));
  auto edge_index = [&](NodeId a, NodeId b) {
    auto it = std::lower_bound(edges.begin(), edges.end(), Edge(a, b));
    return static_cast<std::size_t>(it - edges.begin());
  };

  std::vector<std::int64_t> sigma(n);
  std::vector<int> dist(n);
  std::vector<Scalar> delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), Scalar(0));
    order.clear();
    sigma[s] = 1;
    dist[s] = 0;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      order.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] != dist[w] - 1) continue;
        Scalar c = Scalar(sigma[v]) / Scalar(sigma[w]) * (Scalar(1) + delta[w]);
        cb[edge_index(v, w)] = cb[edge_index(v, w)] + c;
        delta[v] = delta[v] + c;
      }
    }
  }
  // every unordered pair was counted from both of its ends
  for (auto& c : cb) c = c / Scalar(2);
  return cb;
}

/// Top-d existing edges by edge betweenness.
inline Graph sparsify_bc(const Graph& g, std::size_t d) {
  detail::check_budget(g, d);
  const auto cb = edge_betweenness<double>(g);
  std::vector<RankedEdge> r;
  r.reserve(cb.size());
  // Equal centralities reached along different summation orders can differ
  // in the last bits; snapping keeps such ties tied so the pair order decides.
  for (std::size_t i = 0; i < cb.size(); ++i) r.push_back({g.edges()[i], std::round(cb[i] * 1e9) / 1e9});
  return detail::subgraph_with(g, EdgeRanking(std::move(r)).top(d));
}

/// Uniform d-subset of the edges.
inline Graph sparsify_random(const Graph& g, std::size_t d, Rng& rng) {
  detail::check_budget(g, d);
  std::vector<Edge> e = g.edges();
  for (std::size_t i = 0; i < d; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, e.size() - 1);
    std::swap(e[i], e[pick(rng)]);
  }
  e.resize(d);
  return detail::subgraph_with(g, std::move(e));
}

/// ceil(deg^exponent), guarded against pow landing just above an integer.
inline std::size_t local_keep_count(std::size_t degree, double exponent) {
  if (degree == 0) return 0;
  const double k = std::ceil(std::pow(static_cast<double>(degree), exponent) - 1e-9);
  return std::min(degree, static_cast<std::size_t>(std::max(1.0, k)));
}

/// Per-node preference order over incident edges.
using LocalOrder = std::vector<std::vector<NodeId>>;

/// Union over nodes of their first local_keep_count(deg, exponent) preferred
/// neighbors.
inline std::vector<Edge> local_filter_union(const Graph& g, const LocalOrder& order, double exponent) {
  std::set<Edge> keep;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const auto& pref = order[u];
    const std::size_t k = local_keep_count(pref.size(), exponent);
    for (std::size_t i = 0; i < k; ++i) keep.emplace(static_cast<NodeId>(u), pref[i]);
  }
  return {keep.begin(), keep.end()};
}

namespace detail {

/// Smallest exponent in [0,1] (to bisection precision) whose union reaches
/// d edges, then trimmed to exactly d with `trim_score` (higher kept).
inline Graph local_sparsify(const Graph& g, std::size_t d, const LocalOrder& order,
                            const std::function<double(const Edge&)>& trim_score) {
  check_budget(g, d);
  double lo = 0.0;
  double hi = 1.0;
  std::vector<Edge> best = local_filter_union(g, order, 0.0);
  if (best.size() < d) {
    for (int iter = 0; iter < 50; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (local_filter_union(g, order, mid).size() >= d)
        hi = mid;
      else
        lo = mid;
    }
    best = local_filter_union(g, order, hi);
  }
  std::vector<RankedEdge> r;
  r.reserve(best.size());
  for (const Edge& e : best) r.push_back({e, trim_score(e)});
  return subgraph_with(g, EdgeRanking(std::move(r)).top(d));
}

}  // namespace detail

/// Each node ranks neighbors by Jaccard coefficient (ties: smaller id).
inline LocalOrder jaccard_local_order(const Graph& g) {
  LocalOrder order(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    std::vector<std::pair<double, NodeId>> s;
    for (NodeId v : g.neighbors(static_cast<NodeId>(u))) s.emplace_back(-jaccard(g, static_cast<NodeId>(u), v), v);
    std::sort(s.begin(), s.end());
    for (const auto& [neg, v] : s) order[u].push_back(v);
  }
  return order;
}

/// Each node ranks neighbors by the neighbor's degree, highest first (ties:
/// smaller id).
inline LocalOrder degree_local_order(const Graph& g) {
  LocalOrder order(g.node_count());
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    order[u] = g.neighbors(static_cast<NodeId>(u));
    std::stable_sort(order[u].begin(), order[u].end(),
                     [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  }
  return order;
}

/// Local Jaccard filtering with the exponent chosen to hit d edges.
inline Graph sparsify_lspar(const Graph& g, std::size_t d) {
  return detail::local_sparsify(g, d, jaccard_local_order(g),
                                [&](const Edge& e) { return jaccard(g, e.u, e.v); });
}

/// Local-degree score of an edge: max over its endpoints of
/// 1 - log(rank) / log(deg), where rank is the 1-based position of the other
/// endpoint in the node's degree order. Degree-1 nodes score 1.
inline std::vector<double> local_degree_scores(const Graph& g, const LocalOrder& order) {
  std::vector<double> score(g.edge_count(), 0.0);
  const auto& edges = g.edges();
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const double deg = static_cast<double>(order[u].size());
    for (std::size_t r = 0; r < order[u].size(); ++r) {
      const double s = deg <= 1.0 ? 1.0 : 1.0 - std::log(static_cast<double>(r + 1)) / std::log(deg);
      auto it = std::lower_bound(edges.begin(), edges.end(), Edge(static_cast<NodeId>(u), order[u][r]));
      auto& slot = score[static_cast<std::size_t>(it - edges.begin())];
      slot = std::max(slot, s);
    }
  }
  return score;
}

/// Local Degree: keep edges towards high-degree neighbors.
inline Graph sparsify_ld(const Graph& g, std::size_t d) {
  const auto order = degree_local_order(g);
  const auto scores = local_degree_scores(g, order);
  const auto& edges = g.edges();
  return detail::local_sparsify(g, d, order, [&](const Edge& e) {
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    return scores[static_cast<std::size_t>(it - edges.begin())];
  });
}

}  // namespace gsgan
