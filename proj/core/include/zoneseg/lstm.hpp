#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "zoneseg/model.hpp"
#include "zoneseg/random.hpp"

namespace zoneseg {

// Activations kept from one LSTM step for backprop. x is left empty inside
// a BiLSTM pass, whose cache holds all inputs together.
struct LstmCellCache {
  Eigen::VectorXd x;
  Eigen::VectorXd h_prev;
  Eigen::VectorXd c_prev;
  Eigen::VectorXd input_gate;
  Eigen::VectorXd forget_gate;
  Eigen::VectorXd candidate;
  Eigen::VectorXd output_gate;
  Eigen::VectorXd c;
  Eigen::VectorXd tanh_c;
};

struct LstmCellOutput {
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  LstmCellCache cache;
};

// Throws DimensionMismatchError on inconsistent shapes.
LstmCellOutput lstm_cell_forward(const LstmWeights& weights,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& h_prev,
                                 const Eigen::VectorXd& c_prev);

struct LstmCellGrad {
  Eigen::VectorXd dx;
  Eigen::VectorXd dh_prev;
  Eigen::VectorXd dc_prev;
};

// dh and dc are the gradients reaching this step's h and c from above and
// from the next step. Weight gradients are accumulated into grads.
LstmCellGrad lstm_cell_backward(const LstmWeights& weights,
                                const LstmCellCache& cache,
                                const Eigen::VectorXd& dh,
                                const Eigen::VectorXd& dc,
                                LstmWeights& grads);

// Intermediate state of a BiLSTM pass.
struct BiLstmCache {
  Eigen::MatrixXd inputs;               // L x D embeddings
  std::vector<LstmCellCache> forward;   // position order
  std::vector<LstmCellCache> backward;  // position order
  Eigen::MatrixXd hidden;               // L x 2H after dropout
  Eigen::MatrixXd dropout_mask;         // L x 2H scaled mask, empty at inference
};

// L x K emission scores. With rng given, inverted dropout is applied to the
// concatenated hidden states; without it the pass is deterministic.
Eigen::MatrixXd bilstm_forward(const ModelParams& params,
                               std::span<const Eigen::VectorXd> embeddings,
                               Rng* dropout_rng = nullptr,
                               BiLstmCache* cache = nullptr);

// Backprop of emission gradients (L x K) through projection, dropout and
// both LSTM directions; accumulates into grads.
void bilstm_backward(const ModelParams& params, const BiLstmCache& cache,
                     const Eigen::MatrixXd& d_emissions, ModelParams& grads);

}  // namespace zoneseg
