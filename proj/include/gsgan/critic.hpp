#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gsgan/generator.hpp"
#include "gsgan/lstm.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

/// WGAN critic: node embedding, one LSTM cell from zero state, and an
/// unsquashed linear readout of the final hidden state.
struct DiscriminatorParams {
  ModelDims dims;
  Matrix embedding;
  LSTMCellParams cell;
  Matrix out_weight;  // 1 x hidden
  Matrix out_bias;    // 1 x 1

  DiscriminatorParams() = default;
  explicit DiscriminatorParams(const ModelDims& d) : dims(d), cell(d.embed_dim, d.hidden_dim) {
    embedding = Matrix::Zero(static_cast<Eigen::Index>(d.node_count), static_cast<Eigen::Index>(d.embed_dim));
    out_weight = Matrix::Zero(1, static_cast<Eigen::Index>(d.hidden_dim));
    out_bias = Matrix::Zero(1, 1);
  }

  std::vector<ParamBlock> blocks() {
    return {{"embedding", &embedding},
            {"cell_weight", &cell.weight},
            {"cell_bias", &cell.bias},
            {"out_weight", &out_weight},
            {"out_bias", &out_bias}};
  }
};

/// Uniform initialization inside [-clip, clip].
inline DiscriminatorParams init_critic(const ModelDims& dims, double clip, Rng& rng) {
  DiscriminatorParams p(dims);
  std::uniform_real_distribution<double> u(-clip, clip);
  for (auto& b : p.blocks())
    for (Eigen::Index c = 0; c < b.value->cols(); ++c)
      for (Eigen::Index r = 0; r < b.value->rows(); ++r) (*b.value)(r, c) = u(rng);
  return p;
}

struct CriticTrace {
  std::vector<NodeId> nodes;
  std::vector<LSTMStepCache> steps;
  double score = 0.0;
};

inline CriticTrace critic_forward(const DiscriminatorParams& dp, const RandomWalk& w) {
  const auto d = static_cast<Eigen::Index>(dp.dims.hidden_dim);
  CriticTrace tr;
  tr.nodes = w.nodes;
  Vector h = Vector::Zero(d);
  Vector c = Vector::Zero(d);
  tr.steps.reserve(w.nodes.size());
  for (NodeId v : w.nodes) {
    if (v < 0 || static_cast<std::size_t>(v) >= dp.dims.node_count)
      throw std::out_of_range("walk node " + std::to_string(v) + " outside critic vocabulary");
    tr.steps.push_back(lstm_forward(dp.cell, dp.embedding.row(v).transpose(), h, c));
    h = tr.steps.back().h;
    c = tr.steps.back().c;
  }
  tr.score = (dp.out_weight * h)(0, 0) + dp.out_bias(0, 0);
  if (!std::isfinite(tr.score)) throw DivergenceError("non-finite critic score");
  return tr;
}

inline double critic_score(const DiscriminatorParams& dp, const RandomWalk& w) {
  return critic_forward(dp, w).score;
}

/// Adds coef * ∇ D(walk) to `grad`.
inline void accumulate_critic_gradient(const DiscriminatorParams& dp, const CriticTrace& tr, double coef,
                                       DiscriminatorParams& grad) {
  const auto d = static_cast<Eigen::Index>(dp.dims.hidden_dim);
  if (tr.steps.empty()) {
    grad.out_bias(0, 0) += coef;
    return;
  }
  grad.out_weight.noalias() += coef * tr.steps.back().h.transpose();
  grad.out_bias(0, 0) += coef;
  Vector dh = coef * dp.out_weight.row(0).transpose();
  Vector dc = Vector::Zero(d);
  for (std::size_t k = tr.steps.size(); k-- > 0;) {
    auto in = lstm_backward(dp.cell, tr.steps[k], dh, dc, grad.cell);
    grad.embedding.row(tr.nodes[k]) += in.input.transpose();
    dh = std::move(in.h_prev);
    dc = std::move(in.c_prev);
  }
}

/// Critic objective mean D(real) - mean D(fake), the quantity the critic
/// ascends.
inline double critic_objective(const DiscriminatorParams& dp, std::span<const RandomWalk> real,
                               std::span<const RandomWalk> fake) {
  double r = 0.0;
  double f = 0.0;
  for (const auto& w : real) r += critic_score(dp, w);
  for (const auto& w : fake) f += critic_score(dp, w);
  return r / static_cast<double>(real.size()) - f / static_cast<double>(fake.size());
}

struct CriticStep {
  double loss = 0.0;  // objective before the step
  double mean_real = 0.0;
  double mean_fake = 0.0;
};

/// Gradient of critic_objective, plus the objective's value.
inline DiscriminatorParams critic_gradient(const DiscriminatorParams& dp, std::span<const RandomWalk> real,
                                           std::span<const RandomWalk> fake, CriticStep* out = nullptr) {
  if (real.empty() || fake.empty()) throw std::invalid_argument("critic batches must be nonempty");
  DiscriminatorParams grad = zeros_like(dp);
  CriticStep s;
  const double wr = 1.0 / static_cast<double>(real.size());
  const double wf = 1.0 / static_cast<double>(fake.size());
  for (const auto& w : real) {
    auto tr = critic_forward(dp, w);
    s.mean_real += wr * tr.score;
    accumulate_critic_gradient(dp, tr, wr, grad);
  }
  for (const auto& w : fake) {
    auto tr = critic_forward(dp, w);
    s.mean_fake += wf * tr.score;
    accumulate_critic_gradient(dp, tr, -wf, grad);
  }
  s.loss = s.mean_real - s.mean_fake;
  if (out) *out = s;
  return grad;
}

/// Clamps every parameter into [-clip, clip].
inline void clip_weights(DiscriminatorParams& dp, double clip) {
  for (auto& b : dp.blocks()) *b.value = b.value->cwiseMax(-clip).cwiseMin(clip);
}

/// One ascent step on the critic objective followed by weight clipping.
inline CriticStep critic_update(DiscriminatorParams& dp, RmsProp& opt, std::span<const RandomWalk> real,
                                std::span<const RandomWalk> fake, double lr, double clip) {
  if (real.size() != fake.size()) throw std::invalid_argument("critic batches must have equal size");
  if (!(clip > 0.0)) throw std::invalid_argument("clip bound must be positive");
  CriticStep s;
  DiscriminatorParams grad = critic_gradient(dp, real, fake, &s);
  if (!all_finite(grad)) throw DivergenceError("non-finite critic gradient");
  opt.step(dp, grad, lr, +1.0);
  clip_weights(dp, clip);
  if (!all_finite(dp)) throw DivergenceError("non-finite critic parameters");
  return s;
}

}  // namespace gsgan
