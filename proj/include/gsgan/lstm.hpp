#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsgan/rng.hpp"

namespace gsgan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when an activation, loss or gradient stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named view of one parameter block.
struct ParamBlock {
  std::string_view name;
  Matrix* value;
};

/// Gate weights of one LSTM cell. Rows of `weight` and `bias` are stacked in
/// the order input, forget, output, candidate; columns of `weight` are the
/// cell input followed by the previous hidden state.
struct LSTMCellParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix weight;
  Matrix bias;

  LSTMCellParams() = default;
  LSTMCellParams(std::size_t in, std::size_t hidden)
      : input_dim(in),
        hidden_dim(hidden),
        weight(Matrix::Zero(static_cast<Eigen::Index>(4 * hidden), static_cast<Eigen::Index>(in + hidden))),
        bias(Matrix::Zero(static_cast<Eigen::Index>(4 * hidden), 1)) {}
};

/// Activations of one cell step, kept for backpropagation.
struct LSTMStepCache {
  Vector input;
  Vector h_prev;
  Vector c_prev;
  Vector in_gate;
  Vector forget_gate;
  Vector out_gate;
  Vector candidate;
  Vector c;
  Vector tanh_c;
  Vector h;
};

namespace detail {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw DivergenceError(std::string("non-finite ") + what);
}

}  // namespace detail

inline LSTMStepCache lstm_forward(const LSTMCellParams& p, const Vector& x, const Vector& h_prev,
                                  const Vector& c_prev) {
  const auto d = static_cast<Eigen::Index>(p.hidden_dim);
  const auto in = static_cast<Eigen::Index>(p.input_dim);
  LSTMStepCache s;
  s.input = x;
  s.h_prev = h_prev;
  s.c_prev = c_prev;
  Vector pre = p.weight.leftCols(in) * x + p.weight.rightCols(d) * h_prev + p.bias.col(0);
  s.in_gate = pre.segment(0, d).unaryExpr(&detail::sigmoid);
  s.forget_gate = pre.segment(d, d).unaryExpr(&detail::sigmoid);
  s.out_gate = pre.segment(2 * d, d).unaryExpr(&detail::sigmoid);
  s.candidate = pre.segment(3 * d, d).array().tanh();
  s.c = s.forget_gate.cwiseProduct(c_prev) + s.in_gate.cwiseProduct(s.candidate);
  s.tanh_c = s.c.array().tanh();
  s.h = s.out_gate.cwiseProduct(s.tanh_c);
  detail::require_finite(s.h, "LSTM activation");
  return s;
}

struct LSTMInputGrads {
  Vector input;
  Vector h_prev;
  Vector c_prev;
};

/// Backpropagates `dh`, `dc` (gradients w.r.t. this step's h and c) through
/// one step, accumulating into `grad` and returning gradients of the inputs.
inline LSTMInputGrads lstm_backward(const LSTMCellParams& p, const LSTMStepCache& s, const Vector& dh,
                                    const Vector& dc_in, LSTMCellParams& grad) {
  const auto d = static_cast<Eigen::Index>(p.hidden_dim);
  const auto in = static_cast<Eigen::Index>(p.input_dim);
  Vector dc = dc_in + dh.cwiseProduct(s.out_gate).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix());

  Vector dpre(4 * d);
  dpre.segment(0, d) = dc.cwiseProduct(s.candidate).cwiseProduct(
      s.in_gate.cwiseProduct((1.0 - s.in_gate.array()).matrix()));
  dpre.segment(d, d) = dc.cwiseProduct(s.c_prev).cwiseProduct(
      s.forget_gate.cwiseProduct((1.0 - s.forget_gate.array()).matrix()));
  dpre.segment(2 * d, d) = dh.cwiseProduct(s.tanh_c).cwiseProduct(
      s.out_gate.cwiseProduct((1.0 - s.out_gate.array()).matrix()));
  dpre.segment(3 * d, d) =
      dc.cwiseProduct(s.in_gate).cwiseProduct((1.0 - s.candidate.array().square()).matrix());

  grad.weight.leftCols(in).noalias() += dpre * s.input.transpose();
  grad.weight.rightCols(d).noalias() += dpre * s.h_prev.transpose();
  grad.bias.col(0) += dpre;

  LSTMInputGrads out;
  out.input = p.weight.leftCols(in).transpose() * dpre;
  out.h_prev = p.weight.rightCols(d).transpose() * dpre;
  out.c_prev = dc.cwiseProduct(s.forget_gate);
  return out;
}

/// Fills a block with N(0, scale^2) entries.
inline void randomize(Matrix& m, double scale, Rng& rng) {
  std::normal_distribution<double> n(0.0, scale);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = n(rng);
}

/// Parameter-set helpers shared by the generator and critic. `P` exposes
/// `blocks()` returning its ParamBlocks in a fixed order.
template <class P>
P zeros_like(const P& p) {
  P z = p;
  for (auto& b : z.blocks()) b.value->setZero();
  return z;
}

template <class P>
bool all_finite(const P& p) {
  for (const auto& b : const_cast<P&>(p).blocks())
    if (!b.value->allFinite()) return false;
  return true;
}

template <class P>
double max_abs(const P& p) {
  double m = 0.0;
  for (const auto& b : const_cast<P&>(p).blocks())
    if (b.value->size() > 0) m = std::max(m, b.value->cwiseAbs().maxCoeff());
  return m;
}

template <class P>
void scale_in_place(P& p, double factor) {
  for (auto& b : p.blocks()) *b.value *= factor;
}

/// RMSProp with a per-parameter squared-gradient accumulator.
class RmsProp {
 public:
  explicit RmsProp(double decay = 0.9, double epsilon = 1e-8) : decay_(decay), epsilon_(epsilon) {}

  /// Moves `params` by `sign * lr * g / (sqrt(acc) + eps)`; sign is +1 for
  /// ascent and -1 for descent.
  template <class P>
  void step(P& params, P& grads, double lr, double sign) {
    auto pb = params.blocks();
    auto gb = grads.blocks();
    if (acc_.empty()) {
      for (const auto& g : gb) acc_.push_back(Matrix::Zero(g.value->rows(), g.value->cols()));
    }
    if (acc_.size() != gb.size()) throw std::logic_error("optimizer/parameter layout mismatch");
    for (std::size_t k = 0; k < gb.size(); ++k) {
      const Matrix& g = *gb[k].value;
      acc_[k] = decay_ * acc_[k] + (1.0 - decay_) * g.cwiseProduct(g);
      *pb[k].value += (sign * lr) * g.cwiseQuotient((acc_[k].array().sqrt() + epsilon_).matrix());
    }
  }

 private:
  double decay_;
  double epsilon_;
  std::vector<Matrix> acc_;
};

}  // namespace gsgan
