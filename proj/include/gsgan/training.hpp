#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsgan/critic.hpp"
#include "gsgan/generator.hpp"
#include "gsgan/scoring.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

/// When the walk reward replaces the constant 1.
enum class GateMode {
  PerSample,  // per walk, when its critic score is negative
  Batch,      // for the whole batch, when the previous iteration's L_G < 0
  Off,        // never: every reward is 1
};

inline std::string_view to_string(GateMode g) {
  switch (g) {
    case GateMode::PerSample: return "per_sample";
    case GateMode::Batch: return "batch";
    case GateMode::Off: return "off";
  }
  return "?";
}

inline GateMode parse_gate_mode(std::string_view s) {
  if (s == "per_sample") return GateMode::PerSample;
  if (s == "batch") return GateMode::Batch;
  if (s == "off") return GateMode::Off;
  throw InputError("unknown gate mode '" + std::string(s) + "'");
}

struct TrainingConfig {
  std::size_t batch_size = 64;
  double learning_rate = 3e-3;
  std::size_t critic_steps = 5;
  double clip = 0.05;
  std::size_t iterations = 800;
  std::size_t walk_length = 16;
  std::size_t latent_dim = 16;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  RewardKind reward = RewardKind::DensityJaccard;
  GateMode gate = GateMode::Batch;
  bool reward_baseline = true;
  bool normalize_reward = false;
  double rmsprop_decay = 0.9;
  std::uint64_t seed = 1;

  void validate() const {
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (!(clip > 0.0)) throw std::invalid_argument("clip must be > 0");
    if (critic_steps < 1) throw std::invalid_argument("critic_steps must be >= 1");
    if (walk_length < 2) throw std::invalid_argument("walk_length must be >= 2");
    if (latent_dim < 1 || embed_dim < 1 || hidden_dim < 1) throw std::invalid_argument("model dims must be >= 1");
  }

  ModelDims dims(std::size_t node_count) const {
    return {node_count, latent_dim, embed_dim, hidden_dim, walk_length};
  }

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct IterationStats {
  std::size_t iteration = 0;
  double loss_generator = 0.0;
  double loss_critic = 0.0;
  double mean_reward = 0.0;
  double mean_real = 0.0;
  double mean_fake = 0.0;

  friend bool operator==(const IterationStats&, const IterationStats&) = default;
};

struct TrainingStats {
  std::vector<IterationStats> iterations;
};

inline void write_stats_csv(std::ostream& out, const TrainingStats& stats) {
  out << "iteration,L_G,L_D,mean_reward,mean_D_real,mean_D_fake\n";
  out.precision(17);
  for (const auto& s : stats.iterations)
    out << s.iteration << ',' << s.loss_generator << ',' << s.loss_critic << ',' << s.mean_reward << ','
        << s.mean_real << ',' << s.mean_fake << '\n';
}

/// Generated walk together with the reward assigned to it.
struct GeneratorSample {
  GeneratedWalk generated;
  double reward = 1.0;
};

struct GeneratorGradient {
  GeneratorParams grad;
  double loss = 0.0;  // -(1/m) Σ D(w_i) reward_i
};

/// Score-function gradient of L_G = -(1/m) Σ D(w_i) reward_i:
/// -(1/m) Σ_i D(w_i) reward_i ∇ Σ_t log p(w_i,t). With `baseline` the batch
/// mean of D(w_i) reward_i is subtracted from each weight.
inline GeneratorGradient generator_gradient(const GeneratorParams& gp, const DiscriminatorParams& dp,
                                            std::span<const GeneratorSample> batch, bool baseline = false) {
  if (batch.empty()) throw std::invalid_argument("generator batch must be nonempty");
  const double m = static_cast<double>(batch.size());
  std::vector<double> weight;
  weight.reserve(batch.size());
  double mean = 0.0;
  for (const auto& s : batch) {
    weight.push_back(critic_score(dp, s.generated.walk) * s.reward);
    mean += weight.back() / m;
  }
  GeneratorGradient out{zeros_like(gp), -mean};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double w = baseline ? weight[i] - mean : weight[i];
    if (w == 0.0) continue;
    auto tr = replay_generator(gp, batch[i].generated.latent, batch[i].generated.walk);
    accumulate_log_prob_gradient(gp, tr, -w / m, out.grad);
  }
  if (!all_finite(out.grad)) throw DivergenceError("non-finite generator gradient");
  return out;
}

struct TrainedModel {
  TrainingConfig config;
  GeneratorParams generator;
  DiscriminatorParams critic;
  TrainingStats stats;
};

/// Divergence during training; carries the statistics gathered so far.
class TrainingDiverged : public DivergenceError {
 public:
  TrainingDiverged(const std::string& what, TrainingStats stats)
      : DivergenceError(what), stats_(std::move(stats)) {}
  const TrainingStats& stats() const { return stats_; }

 private:
  TrainingStats stats_;
};

using ProgressCallback = std::function<void(const IterationStats&)>;

namespace detail {

inline std::vector<RandomWalk> sample_real_batch(const WalkCorpus& corpus, std::size_t m, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, corpus.walks.size() - 1);
  std::vector<RandomWalk> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(corpus.walks[pick(rng)]);
  return out;
}

}  // namespace detail

/// Adversarial training: per iteration one generator step (rewards from the
/// original graph) followed by `critic_steps` clipped critic steps.
inline TrainedModel train(const Graph& g, const WalkCorpus& corpus, const TrainingConfig& cfg,
                          const ProgressCallback& progress = {}) {
  cfg.validate();
  if (corpus.walks.empty()) throw std::invalid_argument("training corpus is empty");
  if (!(corpus.source == GraphFingerprint::of(g)))
    throw std::invalid_argument("corpus was not sampled from this graph");
  if (corpus.walk_length() != cfg.walk_length)
    throw std::invalid_argument("corpus walk length differs from configured walk_length");

  const ModelDims dims = cfg.dims(g.node_count());
  Rng init_rng(substream_seed(cfg.seed, "init"));
  Rng gen_rng(substream_seed(cfg.seed, "generator"));
  Rng data_rng(substream_seed(cfg.seed, "data"));

  TrainedModel model;
  model.config = cfg;
  model.generator = init_generator(dims, init_rng);
  model.critic = init_critic(dims, cfg.clip, init_rng);

  RmsProp gen_opt(cfg.rmsprop_decay);
  RmsProp critic_opt(cfg.rmsprop_decay);
  ScoreCache scores(g, cfg.reward);
  const RewardOptions ropts{cfg.normalize_reward};
  const std::size_t m = cfg.batch_size;
  double previous_loss_g = 0.0;

  auto fake_batch = [&]() {
    std::vector<RandomWalk> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
      out.push_back(generate_walk(model.generator, sample_latent(dims, gen_rng), DecodeMode::Sample, gen_rng).walk);
    return out;
  };

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    IterationStats st;
    st.iteration = it;
    try {
      std::vector<GeneratorSample> batch;
      batch.reserve(m);
      const bool batch_gate = cfg.gate == GateMode::Batch && previous_loss_g < 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        GeneratorSample s;
        s.generated = generate_walk(model.generator, sample_latent(dims, gen_rng), DecodeMode::Sample, gen_rng);
        switch (cfg.gate) {
          case GateMode::PerSample:
            s.reward = scores.reward(s.generated.walk, critic_score(model.critic, s.generated.walk), ropts);
            break;
          case GateMode::Batch: s.reward = batch_gate ? scores.gated_sum(s.generated.walk, ropts) : 1.0; break;
          case GateMode::Off: s.reward = 1.0; break;
        }
        st.mean_reward += s.reward / static_cast<double>(m);
        batch.push_back(std::move(s));
      }
      auto gg = generator_gradient(model.generator, model.critic, batch, cfg.reward_baseline);
      gen_opt.step(model.generator, gg.grad, cfg.learning_rate, -1.0);
      if (!all_finite(model.generator)) throw DivergenceError("non-finite generator parameters");
      st.loss_generator = gg.loss;
      previous_loss_g = gg.loss;

      for (std::size_t k = 0; k < cfg.critic_steps; ++k) {
        auto real = detail::sample_real_batch(corpus, m, data_rng);
        auto fake = fake_batch();
        auto cs = critic_update(model.critic, critic_opt, real, fake, cfg.learning_rate, cfg.clip);
        st.loss_critic = cs.loss;
        st.mean_real = cs.mean_real;
        st.mean_fake = cs.mean_fake;
      }
    } catch (const DivergenceError& e) {
      throw TrainingDiverged(std::string(e.what()) + " at iteration " + std::to_string(it), model.stats);
    }
    if (!std::isfinite(st.loss_generator) || !std::isfinite(st.loss_critic))
      throw TrainingDiverged("non-finite loss at iteration " + std::to_string(it), model.stats);
    model.stats.iterations.push_back(st);
    if (progress) progress(st);
  }
  return model;
}

/// `count` walks from a trained generator, with latents drawn from `seed`.
inline std::vector<RandomWalk> generate_walks(const GeneratorParams& gp, std::size_t count, DecodeMode mode,
                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RandomWalk> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(generate_walk(gp, sample_latent(gp.dims, rng), mode, rng).walk);
  return out;
}

}  // namespace gsgan
