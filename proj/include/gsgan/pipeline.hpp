#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsgan/assembly.hpp"
#include "gsgan/baselines.hpp"
#include "gsgan/graph.hpp"
#include "gsgan/rng.hpp"
#include "gsgan/training.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

enum class Method { GSGAN, JC, BC, RAND, LSPAR, LD, ORIGINAL };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::GSGAN: return "GSGAN";
    case Method::JC: return "JC";
    case Method::BC: return "BC";
    case Method::RAND: return "RAND";
    case Method::LSPAR: return "LSPAR";
    case Method::LD: return "LD";
    case Method::ORIGINAL: return "ORIGINAL";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::GSGAN, Method::JC, Method::BC, Method::RAND, Method::LSPAR, Method::LD, Method::ORIGINAL})
    if (s == to_string(m)) return m;
  throw InputError("unknown method '" + std::string(s) + "'");
}

/// Ablation variants of the adversarial sparsifier.
enum class Variant {
  Full,       // density-Jaccard reward
  Jaccard,    // plain Jaccard reward
  NoReward,   // unit reward, gate disabled
  NoRealWalks // density-Jaccard reward, trained on uniform random node sequences
};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "GSGAN";
    case Variant::Jaccard: return "GSGAN_Jaccard";
    case Variant::NoReward: return "GSGAN_NR";
    case Variant::NoRealWalks: return "GSGAN_NRWs";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::Full, Variant::Jaccard, Variant::NoReward, Variant::NoRealWalks})
    if (s == to_string(v)) return v;
  throw InputError("unknown variant '" + std::string(s) + "'");
}

/// Training configuration of a variant, derived from the full model's.
inline TrainingConfig variant_config(TrainingConfig base, Variant v) {
  switch (v) {
    case Variant::Full:
    case Variant::NoRealWalks: base.reward = RewardKind::DensityJaccard; break;
    case Variant::Jaccard: base.reward = RewardKind::Jaccard; break;
    case Variant::NoReward:
      base.reward = RewardKind::Unit;
      base.gate = GateMode::Off;
      break;
  }
  return base;
}

struct GsganSettings {
  TrainingConfig training;
  std::size_t corpus_size = 0;      // 0: default_walk_count(g)
  std::size_t generated_walks = 0;  // 0: default_walk_count(g)
  DecodeMode decode = DecodeMode::Sample;
  GrowthMode growth = GrowthMode::Argmax;
  bool artificial_edges = true;

  /// 10 |E| / (T - 1) walks: about ten pair observations per edge.
  std::size_t default_walk_count(const Graph& g) const {
    const std::size_t steps = training.walk_length - 1;
    return std::max<std::size_t>(1, (10 * g.edge_count() + steps - 1) / steps);
  }
  std::size_t corpus_size_for(const Graph& g) const { return corpus_size ? corpus_size : default_walk_count(g); }
  std::size_t generated_walks_for(const Graph& g) const {
    return generated_walks ? generated_walks : default_walk_count(g);
  }
};

/// Uniform random node sequences without immediate repeats, fingerprinted as
/// if drawn from `g`.
inline WalkCorpus random_node_corpus(const Graph& g, std::size_t count, std::size_t length, std::uint64_t seed) {
  if (g.node_count() < 2) throw std::invalid_argument("random sequences need at least two nodes");
  Rng rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count()) - 1);
  std::uniform_int_distribution<NodeId> other(0, static_cast<NodeId>(g.node_count()) - 2);
  WalkCorpus c;
  c.source = GraphFingerprint::of(g);
  c.seed = seed;
  for (std::size_t i = 0; i < count; ++i) {
    RandomWalk w;
    w.nodes.push_back(pick(rng));
    while (w.nodes.size() < length) {
      NodeId v = other(rng);
      if (v >= w.nodes.back()) ++v;
      w.nodes.push_back(v);
    }
    c.walks.push_back(std::move(w));
  }
  return c;
}

/// Training corpus of a variant. Seeds derive from `seed` by name.
inline WalkCorpus variant_corpus(const Graph& g, const GsganSettings& s, Variant v, std::uint64_t seed) {
  const std::uint64_t cseed = substream_seed(seed, "corpus");
  if (v == Variant::NoRealWalks) return random_node_corpus(g, s.corpus_size_for(g), s.training.walk_length, cseed);
  return sample_corpus(g, s.corpus_size_for(g), s.training.walk_length, cseed);
}

inline TrainedModel train_variant(const Graph& g, const GsganSettings& s, Variant v, std::uint64_t seed,
                                  const ProgressCallback& progress = {}) {
  TrainingConfig cfg = variant_config(s.training, v);
  cfg.seed = substream_seed(seed, "training");
  return train(g, variant_corpus(g, s, v, seed), cfg, progress);
}

/// Walk counts from a trained generator; latents come from `seed`.
inline ScoreMatrix generated_scores(const Graph& g, const GeneratorParams& gp, const GsganSettings& s,
                                    std::uint64_t seed) {
  auto walks = generate_walks(gp, s.generated_walks_for(g), s.decode, substream_seed(seed, "generate"));
  return count_edges(walks, g.node_count());
}

inline AssemblyResult assemble_sparsified(const Graph& g, const ScoreMatrix& scores, const GsganSettings& s,
                                          std::size_t budget, std::uint64_t seed) {
  AssemblyOptions opts;
  opts.original_filter = s.artificial_edges ? nullptr : &g;
  opts.reference = &g;
  opts.growth = s.growth;
  opts.growth_seed = substream_seed(seed, "growth");
  return assemble(scores, AssemblyBudget{budget}, opts);
}

struct PipelineResult {
  Graph graph;
  AssemblyReport report;
  TrainingStats stats;
};

/// Corpus, training, generation and assembly for one variant at budget d.
inline PipelineResult run_gsgan_pipeline(const Graph& g, const GsganSettings& s, Variant v, std::size_t budget,
                                         std::uint64_t seed) {
  auto model = train_variant(g, s, v, seed);
  auto scores = generated_scores(g, model.generator, s, seed);
  auto res = assemble_sparsified(g, scores, s, budget, seed);
  return {std::move(res.graph), res.report, std::move(model.stats)};
}

/// Budgeted sparsification with one of the non-learned methods.
inline Graph sparsify_baseline(const Graph& g, Method m, std::size_t budget, std::uint64_t seed) {
  switch (m) {
    case Method::JC: return sparsify_jc(g, budget);
    case Method::BC: return sparsify_bc(g, budget);
    case Method::RAND: {
      Rng rng(substream_seed(seed, "random"));
      return sparsify_random(g, budget, rng);
    }
    case Method::LSPAR: return sparsify_lspar(g, budget);
    case Method::LD: return sparsify_ld(g, budget);
    case Method::ORIGINAL: return g;
    case Method::GSGAN: break;
  }
  throw std::invalid_argument("GSGAN is not a baseline; use run_gsgan_pipeline");
}

}  // namespace gsgan
