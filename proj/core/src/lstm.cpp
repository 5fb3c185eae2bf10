#include "zoneseg/lstm.hpp"

#include <cmath>

#include "zoneseg/error.hpp"

namespace zoneseg {
namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) {
    // Split by sign so exp never overflows.
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
}

void check_cell_shapes(const LstmWeights& w, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
  const Eigen::Index h = w.recurrent.cols();
  if (w.input.rows() != 4 * h || w.recurrent.rows() != 4 * h ||
      w.bias.size() != 4 * h) {
    throw DimensionMismatchError("LSTM weights are not 4H-stacked");
  }
  if (x.size() != w.input.cols()) {
    throw DimensionMismatchError("LSTM input has dim " + std::to_string(x.size()) +
                                 ", weights expect " + std::to_string(w.input.cols()));
  }
  if (h_prev.size() != h || c_prev.size() != h) {
    throw DimensionMismatchError("LSTM state size does not match hidden size");
  }
}

// Cell given its precomputed input projection W_x x; shared by the single
// cell API and the BiLSTM, which projects all positions in one product.
LstmCellOutput cell_from_projection(const LstmWeights& weights, const Eigen::VectorXd& x_proj,
                                    const Eigen::VectorXd& h_prev,
                                    const Eigen::VectorXd& c_prev) {
  const Eigen::Index h = h_prev.size();
  Eigen::VectorXd z = x_proj + weights.bias;
  z.noalias() += weights.recurrent * h_prev;

  LstmCellOutput out;
  LstmCellCache& cache = out.cache;
  cache.h_prev = h_prev;
  cache.c_prev = c_prev;
  cache.input_gate = sigmoid(z.segment(0 * h, h));
  cache.forget_gate = sigmoid(z.segment(1 * h, h));
  cache.candidate = z.segment(2 * h, h).array().tanh();
  cache.output_gate = sigmoid(z.segment(3 * h, h));
  cache.c = cache.forget_gate.cwiseProduct(c_prev) +
            cache.input_gate.cwiseProduct(cache.candidate);
  cache.tanh_c = cache.c.array().tanh();
  out.c = cache.c;
  out.h = cache.output_gate.cwiseProduct(cache.tanh_c);
  return out;
}

// Gate pre-activation gradient; also returns dc_prev. Input and recurrent
// weight gradients are left to the caller.
Eigen::VectorXd gate_gradient(const LstmCellCache& cache, const Eigen::VectorXd& dh,
                              const Eigen::VectorXd& dc, Eigen::VectorXd& dc_prev) {
  const Eigen::Index h = cache.c.size();
  const Eigen::ArrayXd i = cache.input_gate.array();
  const Eigen::ArrayXd f = cache.forget_gate.array();
  const Eigen::ArrayXd g = cache.candidate.array();
  const Eigen::ArrayXd o = cache.output_gate.array();
  const Eigen::ArrayXd tc = cache.tanh_c.array();

  const Eigen::ArrayXd dc_total = dc.array() + dh.array() * o * (1.0 - tc * tc);

  Eigen::VectorXd dz(4 * h);
  dz.segment(0 * h, h) = (dc_total * g * i * (1.0 - i)).matrix();
  dz.segment(1 * h, h) = (dc_total * cache.c_prev.array() * f * (1.0 - f)).matrix();
  dz.segment(2 * h, h) = (dc_total * i * (1.0 - g * g)).matrix();
  dz.segment(3 * h, h) = (dh.array() * tc * o * (1.0 - o)).matrix();
  dc_prev = (dc_total * f).matrix();
  return dz;
}

}  // namespace

LstmCellOutput lstm_cell_forward(const LstmWeights& weights, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& h_prev,
                                 const Eigen::VectorXd& c_prev) {
  check_cell_shapes(weights, x, h_prev, c_prev);
  LstmCellOutput out = cell_from_projection(weights, weights.input * x, h_prev, c_prev);
  out.cache.x = x;
  return out;
}

LstmCellGrad lstm_cell_backward(const LstmWeights& weights, const LstmCellCache& cache,
                                const Eigen::VectorXd& dh, const Eigen::VectorXd& dc,
                                LstmWeights& grads) {
  LstmCellGrad out;
  const Eigen::VectorXd dz = gate_gradient(cache, dh, dc, out.dc_prev);
  grads.input.noalias() += dz * cache.x.transpose();
  grads.recurrent.noalias() += dz * cache.h_prev.transpose();
  grads.bias += dz;
  out.dx = weights.input.transpose() * dz;
  out.dh_prev = weights.recurrent.transpose() * dz;
  return out;
}

Eigen::MatrixXd bilstm_forward(const ModelParams& params,
                               std::span<const Eigen::VectorXd> embeddings,
                               Rng* dropout_rng, BiLstmCache* cache) {
  const int length = static_cast<int>(embeddings.size());
  if (length == 0) throw DimensionMismatchError("BiLSTM needs at least one position");
  const int h = params.hidden();
  Eigen::MatrixXd inputs(length, params.input_dim());
  for (int t = 0; t < length; ++t) {
    const auto& x = embeddings[static_cast<std::size_t>(t)];
    if (x.size() != params.input_dim()) {
      throw DimensionMismatchError("embedding has dim " + std::to_string(x.size()) +
                                   ", model expects " +
                                   std::to_string(params.input_dim()));
    }
    inputs.row(t) = x.transpose();
  }
  // 4H x L input projections for every position at once.
  const Eigen::MatrixXd fwd_proj = params.forward.input * inputs.transpose();
  const Eigen::MatrixXd bwd_proj = params.backward.input * inputs.transpose();

  Eigen::MatrixXd hidden(length, 2 * h);
  std::vector<LstmCellCache> fwd_cache, bwd_cache(static_cast<std::size_t>(length));
  fwd_cache.reserve(static_cast<std::size_t>(length));

  Eigen::VectorXd state_h = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd state_c = Eigen::VectorXd::Zero(h);
  for (int t = 0; t < length; ++t) {
    auto step = cell_from_projection(params.forward, fwd_proj.col(t), state_h, state_c);
    hidden.row(t).head(h) = step.h.transpose();
    state_h = std::move(step.h);
    state_c = std::move(step.c);
    fwd_cache.push_back(std::move(step.cache));
  }
  state_h.setZero();
  state_c.setZero();
  for (int t = length - 1; t >= 0; --t) {
    auto step = cell_from_projection(params.backward, bwd_proj.col(t), state_h, state_c);
    hidden.row(t).tail(h) = step.h.transpose();
    state_h = std::move(step.h);
    state_c = std::move(step.c);
    bwd_cache[static_cast<std::size_t>(t)] = std::move(step.cache);
  }

  Eigen::MatrixXd mask;
  const double rate = params.config.dropout_rate;
  if (dropout_rng != nullptr && rate > 0.0) {
    const double keep_scale = 1.0 / (1.0 - rate);
    mask.resize(length, 2 * h);
    // Row-major draw order keeps the mask independent of Eigen's layout.
    for (int t = 0; t < length; ++t) {
      for (int j = 0; j < 2 * h; ++j) {
        mask(t, j) = uniform_unit(*dropout_rng) < rate ? 0.0 : keep_scale;
      }
    }
    hidden = hidden.cwiseProduct(mask);
  }

  Eigen::MatrixXd emissions = hidden * params.projection;
  emissions.rowwise() += params.projection_bias.transpose();

  if (cache != nullptr) {
    cache->inputs = std::move(inputs);
    cache->forward = std::move(fwd_cache);
    cache->backward = std::move(bwd_cache);
    cache->hidden = std::move(hidden);
    cache->dropout_mask = std::move(mask);
  }
  return emissions;
}

void bilstm_backward(const ModelParams& params, const BiLstmCache& cache,
                     const Eigen::MatrixXd& d_emissions, ModelParams& grads) {
  const int length = static_cast<int>(cache.forward.size());
  const int h = params.hidden();
  if (d_emissions.rows() != length || d_emissions.cols() != params.num_labels()) {
    throw DimensionMismatchError("emission gradient shape does not match the pass");
  }

  grads.projection.noalias() += cache.hidden.transpose() * d_emissions;
  grads.projection_bias += d_emissions.colwise().sum().transpose();

  Eigen::MatrixXd d_hidden = d_emissions * params.projection.transpose();
  if (cache.dropout_mask.size() != 0) d_hidden = d_hidden.cwiseProduct(cache.dropout_mask);

  // Gate gradients are collected per position (4H x L) so the input weight
  // gradient is one product; the embeddings themselves are frozen.
  auto run_direction = [&](const LstmWeights& weights, const std::vector<LstmCellCache>& steps,
                           bool reverse_time, int column_offset, LstmWeights& g) {
    Eigen::MatrixXd dz_all(4 * h, length);
    Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
    for (int k = 0; k < length; ++k) {
      const int t = reverse_time ? k : length - 1 - k;
      const auto& step = steps[static_cast<std::size_t>(t)];
      const Eigen::VectorXd dh = d_hidden.row(t).segment(column_offset, h).transpose() + dh_next;
      Eigen::VectorXd dc_prev;
      const Eigen::VectorXd dz = gate_gradient(step, dh, dc_next, dc_prev);
      g.recurrent.noalias() += dz * step.h_prev.transpose();
      dz_all.col(t) = dz;
      dh_next.noalias() = weights.recurrent.transpose() * dz;
      dc_next = std::move(dc_prev);
    }
    g.input.noalias() += dz_all * cache.inputs;
    g.bias += dz_all.rowwise().sum();
  };
  // forward direction backpropagates from the last position, backward from the first
  run_direction(params.forward, cache.forward, false, 0, grads.forward);
  run_direction(params.backward, cache.backward, true, h, grads.backward);
}

}  // namespace zoneseg
