#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gsgan/graph.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

enum class RewardKind { Jaccard, DensityJaccard, Unit };

inline std::string_view to_string(RewardKind k) {
  switch (k) {
    case RewardKind::Jaccard: return "jaccard";
    case RewardKind::DensityJaccard: return "density_jaccard";
    case RewardKind::Unit: return "unit";
  }
  return "?";
}

inline RewardKind parse_reward_kind(std::string_view s) {
  if (s == "jaccard") return RewardKind::Jaccard;
  if (s == "density_jaccard") return RewardKind::DensityJaccard;
  if (s == "unit") return RewardKind::Unit;
  throw InputError("unknown reward kind '" + std::string(s) + "'");
}

struct EdgeScore {
  Edge pair;
  double value = 0.0;
};

namespace detail {

inline std::size_t intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace detail

/// |N(u) ∩ N(v)| / |N(u) ∪ N(v)|, 0 on an empty union. Defined for any pair,
/// adjacent or not.
inline double jaccard(const Graph& g, NodeId u, NodeId v) {
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  const std::size_t inter = detail::intersection_size(nu, nv);
  const std::size_t uni = nu.size() + nv.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Jaccard divided by the density of the subgraph induced on N(u) ∪ N(v).
/// A zero density is floored to that of a single edge. The quotient is
/// formed from integer counts so it is rounded once.
inline double density_jaccard(const Graph& g, NodeId u, NodeId v) {
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  const std::uint64_t inter = detail::intersection_size(nu, nv);
  if (inter == 0) return 0.0;
  const std::uint64_t uni = nu.size() + nv.size() - inter;
  const Graph sub = neighborhood_union_subgraph(g, u, v);
  const std::uint64_t n = sub.node_count();
  if (n <= 1) return static_cast<double>(inter) / static_cast<double>(uni);
  const std::uint64_t m = std::max<std::uint64_t>(sub.edge_count(), 1);
  // (inter / uni) / (2m / (n(n-1)))
  return static_cast<double>(inter * n * (n - 1)) / static_cast<double>(uni * 2 * m);
}

inline EdgeScore f_score(const Graph& g, const Edge& e, RewardKind kind) {
  if (e.degenerate()) return {e, 0.0};
  switch (kind) {
    case RewardKind::Jaccard: return {e, jaccard(g, e.u, e.v)};
    case RewardKind::DensityJaccard: return {e, density_jaccard(g, e.u, e.v)};
    case RewardKind::Unit: g.check_node(e.u); g.check_node(e.v); return {e, 1.0};
  }
  return {e, 0.0};
}

struct RewardOptions {
  /// Divide the summed edge score by the number of steps (T - 1).
  bool normalize_by_length = false;
};

/// Walk reward: the summed edge scores when the critic rates the walk below
/// zero, else 1.
inline double walk_reward(const Graph& g, const RandomWalk& w, double critic_score, RewardKind kind,
                          RewardOptions opts = {}) {
  if (!(critic_score < 0.0)) return 1.0;
  double sum = 0.0;
  const auto steps = walk_edges(w);
  for (const auto& s : steps) sum += f_score(g, s.pair, kind).value;
  if (opts.normalize_by_length && !steps.empty()) sum /= static_cast<double>(steps.size());
  return sum;
}

/// Memoizes f_score over one graph and kind. The environment is fixed during
/// training, so scores never go stale.
class ScoreCache {
 public:
  ScoreCache(const Graph& g, RewardKind kind) : graph_(&g), kind_(kind) {}

  double score(const Edge& e) {
    if (e.degenerate()) return 0.0;
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    double v = f_score(*graph_, e, kind_).value;
    cache_.emplace(e, v);
    return v;
  }

  double edge_score_sum(const RandomWalk& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) sum += score(Edge(w.nodes[i], w.nodes[i + 1]));
    return sum;
  }

  /// Same contract as walk_reward.
  double reward(const RandomWalk& w, double critic_score, RewardOptions opts = {}) {
    if (!(critic_score < 0.0)) return 1.0;
    return gated_sum(w, opts);
  }

  /// Summed (optionally normalized) edge score, ignoring the critic gate.
  double gated_sum(const RandomWalk& w, RewardOptions opts = {}) {
    double sum = edge_score_sum(w);
    if (opts.normalize_by_length && w.nodes.size() > 1) sum /= static_cast<double>(w.nodes.size() - 1);
    return sum;
  }

  const Graph& graph() const { return *graph_; }
  RewardKind kind() const { return kind_; }

 private:
  const Graph* graph_;
  RewardKind kind_;
  std::unordered_map<Edge, double, EdgeHash> cache_;
};

}  // namespace gsgan
