#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "gsgan/lstm.hpp"
#include "gsgan/walks.hpp"

namespace gsgan {

struct ModelDims {
  std::size_t node_count = 0;
  std::size_t latent_dim = 16;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t walk_length = 16;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Generator weights. The latent vector is mapped to the initial cell and
/// hidden state through tanh-activated dense layers; each step embeds the
/// previous node (row N of the table is the start token) and projects the
/// hidden state onto logits over the N nodes.
struct GeneratorParams {
  ModelDims dims;
  Matrix init_c_weight;
  Matrix init_c_bias;
  Matrix init_h_weight;
  Matrix init_h_bias;
  Matrix embedding;
  LSTMCellParams cell;
  Matrix out_weight;
  Matrix out_bias;

  GeneratorParams() = default;
  explicit GeneratorParams(const ModelDims& d) : dims(d), cell(d.embed_dim, d.hidden_dim) {
    const auto h = static_cast<Eigen::Index>(d.hidden_dim);
    const auto l = static_cast<Eigen::Index>(d.latent_dim);
    const auto n = static_cast<Eigen::Index>(d.node_count);
    init_c_weight = Matrix::Zero(h, l);
    init_c_bias = Matrix::Zero(h, 1);
    init_h_weight = Matrix::Zero(h, l);
    init_h_bias = Matrix::Zero(h, 1);
    embedding = Matrix::Zero(n + 1, static_cast<Eigen::Index>(d.embed_dim));
    out_weight = Matrix::Zero(n, h);
    out_bias = Matrix::Zero(n, 1);
  }

  std::size_t start_token() const { return dims.node_count; }

  std::vector<ParamBlock> blocks() {
    return {{"init_c_weight", &init_c_weight}, {"init_c_bias", &init_c_bias},
            {"init_h_weight", &init_h_weight}, {"init_h_bias", &init_h_bias},
            {"embedding", &embedding},         {"cell_weight", &cell.weight},
            {"cell_bias", &cell.bias},         {"out_weight", &out_weight},
            {"out_bias", &out_bias}};
  }
};

/// Glorot-style Gaussian initialization; biases start at zero except the
/// forget gate, which starts at 1.
inline GeneratorParams init_generator(const ModelDims& dims, Rng& rng) {
  GeneratorParams p(dims);
  const double l = static_cast<double>(dims.latent_dim);
  const double h = static_cast<double>(dims.hidden_dim);
  const double e = static_cast<double>(dims.embed_dim);
  randomize(p.init_c_weight, std::sqrt(1.0 / l), rng);
  randomize(p.init_h_weight, std::sqrt(1.0 / l), rng);
  randomize(p.embedding, std::sqrt(1.0 / e), rng);
  randomize(p.cell.weight, std::sqrt(1.0 / (e + h)), rng);
  p.cell.bias.block(static_cast<Eigen::Index>(dims.hidden_dim), 0, static_cast<Eigen::Index>(dims.hidden_dim), 1)
      .setOnes();
  randomize(p.out_weight, std::sqrt(1.0 / h), rng);
  return p;
}

inline Vector sample_latent(const ModelDims& dims, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector z(static_cast<Eigen::Index>(dims.latent_dim));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n(rng);
  return z;
}

/// Numerically stable softmax.
inline Vector softmax(const Vector& logits) {
  const double mx = logits.maxCoeff();
  Vector e = (logits.array() - mx).exp();
  return e / e.sum();
}

enum class DecodeMode { Argmax, Sample };

struct GeneratorStep {
  NodeId input = 0;  // previous node, or the start token
  LSTMStepCache cell;
  Vector probs;
  NodeId chosen = 0;
};

/// Full record of one unrolled generator pass.
struct GeneratorTrace {
  Vector latent;
  Vector c0;
  Vector h0;
  std::vector<GeneratorStep> steps;

  RandomWalk walk() const {
    RandomWalk w;
    for (const auto& s : steps) w.nodes.push_back(s.chosen);
    return w;
  }
  std::vector<double> log_probs() const {
    std::vector<double> out;
    for (const auto& s : steps) out.push_back(std::log(s.probs(s.chosen)));
    return out;
  }
};

/// Unrolls the generator for dims.walk_length steps; `choose(probs, t)`
/// returns the node emitted at step t.
template <class Chooser>
GeneratorTrace run_generator(const GeneratorParams& gp, const Vector& latent, Chooser&& choose) {
  if (static_cast<std::size_t>(latent.size()) != gp.dims.latent_dim)
    throw std::invalid_argument("latent vector has wrong length");
  GeneratorTrace tr;
  tr.latent = latent;
  tr.c0 = (gp.init_c_weight * latent + gp.init_c_bias.col(0)).array().tanh();
  tr.h0 = (gp.init_h_weight * latent + gp.init_h_bias.col(0)).array().tanh();
  Vector h = tr.h0;
  Vector c = tr.c0;
  NodeId prev = static_cast<NodeId>(gp.start_token());
  tr.steps.reserve(gp.dims.walk_length);
  for (std::size_t t = 0; t < gp.dims.walk_length; ++t) {
    GeneratorStep st;
    st.input = prev;
    st.cell = lstm_forward(gp.cell, gp.embedding.row(prev).transpose(), h, c);
    Vector logits = gp.out_weight * st.cell.h + gp.out_bias.col(0);
    st.probs = softmax(logits);
    detail::require_finite(st.probs, "generator probabilities");
    st.chosen = choose(st.probs, t);
    if (st.chosen < 0 || static_cast<std::size_t>(st.chosen) >= gp.dims.node_count)
      throw std::out_of_range("generator emitted an out-of-range node");
    h = st.cell.h;
    c = st.cell.c;
    prev = st.chosen;
    tr.steps.push_back(std::move(st));
  }
  return tr;
}

/// Inverse-CDF draw from a probability vector.
inline NodeId sample_index(const Vector& probs, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (r < acc) return static_cast<NodeId>(i);
  }
  for (Eigen::Index i = probs.size() - 1; i > 0; --i)
    if (probs(i) > 0) return static_cast<NodeId>(i);
  return 0;
}

inline NodeId argmax_index(const Vector& probs) {
  Eigen::Index best = 0;
  probs.maxCoeff(&best);
  return static_cast<NodeId>(best);
}

struct GeneratedWalk {
  RandomWalk walk;
  std::vector<double> log_probs;
  Vector latent;
};

inline GeneratedWalk generate_walk(const GeneratorParams& gp, const Vector& latent, DecodeMode mode, Rng& rng) {
  auto tr = run_generator(gp, latent, [&](const Vector& p, std::size_t) {
    return mode == DecodeMode::Argmax ? argmax_index(p) : sample_index(p, rng);
  });
  return {tr.walk(), tr.log_probs(), latent};
}

/// Teacher-forced pass over a fixed walk.
inline GeneratorTrace replay_generator(const GeneratorParams& gp, const Vector& latent, const RandomWalk& w) {
  if (w.length() != gp.dims.walk_length) throw std::invalid_argument("walk length does not match model");
  return run_generator(gp, latent, [&](const Vector&, std::size_t t) { return w.nodes[t]; });
}

/// Σ_t log p(w_t | w_<t, latent).
inline double sequence_log_prob(const GeneratorParams& gp, const Vector& latent, const RandomWalk& w) {
  double s = 0.0;
  for (double lp : replay_generator(gp, latent, w).log_probs()) s += lp;
  return s;
}

/// Adds coef * ∇ Σ_t log p(chosen_t) to `grad`.
inline void accumulate_log_prob_gradient(const GeneratorParams& gp, const GeneratorTrace& tr, double coef,
                                         GeneratorParams& grad) {
  const auto d = static_cast<Eigen::Index>(gp.dims.hidden_dim);
  Vector dh_next = Vector::Zero(d);
  Vector dc_next = Vector::Zero(d);
  for (std::size_t k = tr.steps.size(); k-- > 0;) {
    const GeneratorStep& st = tr.steps[k];
    Vector dlogits = -coef * st.probs;
    dlogits(st.chosen) += coef;
    grad.out_weight.noalias() += dlogits * st.cell.h.transpose();
    grad.out_bias.col(0) += dlogits;
    Vector dh = gp.out_weight.transpose() * dlogits + dh_next;
    auto in = lstm_backward(gp.cell, st.cell, dh, dc_next, grad.cell);
    grad.embedding.row(st.input) += in.input.transpose();
    dh_next = std::move(in.h_prev);
    dc_next = std::move(in.c_prev);
  }
  Vector dpre_c = dc_next.cwiseProduct((1.0 - tr.c0.array().square()).matrix());
  Vector dpre_h = dh_next.cwiseProduct((1.0 - tr.h0.array().square()).matrix());
  grad.init_c_weight.noalias() += dpre_c * tr.latent.transpose();
  grad.init_c_bias.col(0) += dpre_c;
  grad.init_h_weight.noalias() += dpre_h * tr.latent.transpose();
  grad.init_h_bias.col(0) += dpre_h;
}

}  // namespace gsgan
