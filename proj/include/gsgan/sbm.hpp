#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "gsgan/graph.hpp"
#include "gsgan/partition.hpp"
#include "gsgan/rng.hpp"

namespace gsgan {

/// Planted-partition model.
struct SBMSpec {
  std::vector<std::size_t> block_sizes{50, 50};
  double p_in = 0.3;
  double p_out = 0.02;
  std::uint64_t seed = 1;

  void validate() const {
    if (block_sizes.empty()) throw std::invalid_argument("SBM needs at least one block");
    if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0))
      throw std::invalid_argument("SBM requires 0 <= p_out <= p_in <= 1");
  }

  std::size_t node_count() const {
    std::size_t n = 0;
    for (auto s : block_sizes) n += s;
    return n;
  }
};

struct LabeledGraph {
  Graph graph;
  Partition truth;
};

/// Each pair is an edge independently, with p_in inside a block and p_out
/// across blocks. Nodes are numbered block by block.
inline LabeledGraph sbm_generate(const SBMSpec& spec) {
  spec.validate();
  const std::size_t n = spec.node_count();
  LabeledGraph out;
  out.truth.labels.reserve(n);
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b)
    for (std::size_t i = 0; i < spec.block_sizes[b]; ++i) out.truth.labels.push_back(static_cast<std::int64_t>(b));

  Rng rng(spec.seed);
  std::vector<Edge> edges;
  // Geometric skipping over the upper triangle, row by row, so that sparse
  // large graphs cost O(|E|) draws instead of O(n^2).
  auto draw_run = [&](double p, std::size_t remaining, auto&& emit) {
    if (p <= 0.0) return;
    if (p >= 1.0) {
      for (std::size_t k = 0; k < remaining; ++k) emit(k);
      return;
    }
    std::geometric_distribution<std::size_t> skip(p);
    for (std::size_t k = skip(rng); k < remaining; k += skip(rng) + 1) emit(k);
  };
  for (std::size_t u = 0; u < n; ++u) {
    // neighbors v > u split into the rest of u's block and later blocks
    std::size_t block_end = 0;
    for (std::size_t b = 0, start = 0; b < spec.block_sizes.size(); start += spec.block_sizes[b++]) {
      if (u < start + spec.block_sizes[b]) {
        block_end = start + spec.block_sizes[b];
        break;
      }
    }
    draw_run(spec.p_in, block_end - u - 1,
             [&](std::size_t k) { edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(u + 1 + k)); });
    draw_run(spec.p_out, n - block_end,
             [&](std::size_t k) { edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(block_end + k)); });
  }
  out.graph = Graph::from_edges(n, std::move(edges));
  return out;
}

/// Removes each intra-block edge independently with probability `fraction`.
inline Graph withhold_intra_edges(const LabeledGraph& lg, double fraction, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution drop(fraction);
  std::vector<Edge> kept;
  for (const Edge& e : lg.graph.edges()) {
    const bool intra = lg.truth.labels[e.u] == lg.truth.labels[e.v];
    if (intra && drop(rng)) continue;
    kept.push_back(e);
  }
  return Graph::from_edges(lg.graph.node_count(), std::move(kept));
}

}  // namespace gsgan
