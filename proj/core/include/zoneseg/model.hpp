#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "zoneseg/random.hpp"

namespace zoneseg {

struct ModelConfig {
  int input_dim = 0;
  int hidden = 64;
  int num_labels = 0;
  double dropout_rate = 0.25;
  std::string taxonomy;
  std::vector<std::string> zones;
  std::string encoder_kind = "features";
};

// Gate rows are stacked in the order input, forget, candidate, output; each
// block has `hidden` rows.
struct LstmWeights {
  Eigen::MatrixXd input;      // 4H x D
  Eigen::MatrixXd recurrent;  // 4H x H
  Eigen::VectorXd bias;       // 4H

  static LstmWeights zeros(int input_dim, int hidden);
};

enum class Gate : int { kInput = 0, kForget = 1, kCandidate = 2, kOutput = 3 };

// Every trainable tensor of the BiLSTM + CRF labeler. Gradients and
// optimizer accumulators reuse the same shape.
struct ModelParams {
  ModelConfig config;
  LstmWeights forward;
  LstmWeights backward;
  Eigen::MatrixXd projection;       // 2H x K, rows [forward; backward]
  Eigen::VectorXd projection_bias;  // K
  Eigen::MatrixXd transitions;      // K x K, [from][to]
  Eigen::VectorXd start;            // K
  Eigen::VectorXd end;              // K

  static ModelParams zeros(const ModelConfig& config);
  // Uniform in +-1/sqrt(hidden), forget-gate biases 1, CRF tensors 0.
  static ModelParams initialized(const ModelConfig& config, Rng& rng);

  int input_dim() const { return config.input_dim; }
  int hidden() const { return config.hidden; }
  int num_labels() const { return config.num_labels; }

  ModelParams zeros_like() const { return zeros(config); }
  bool all_finite() const;
  std::size_t parameter_count() const;

  // Calls fn(name, tensor) over every tensor in serialization order.
  template <typename Fn>
  void visit(Fn&& fn) {
    visit_tensors(*this, fn);
  }
  template <typename Fn>
  void visit(Fn&& fn) const {
    visit_tensors(*this, fn);
  }

 private:
  template <typename Self, typename Fn>
  static void visit_tensors(Self& self, Fn& fn) {
    fn("lstm.forward.input", self.forward.input);
    fn("lstm.forward.recurrent", self.forward.recurrent);
    fn("lstm.forward.bias", self.forward.bias);
    fn("lstm.backward.input", self.backward.input);
    fn("lstm.backward.recurrent", self.backward.recurrent);
    fn("lstm.backward.bias", self.backward.bias);
    fn("projection.weight", self.projection);
    fn("projection.bias", self.projection_bias);
    fn("crf.transitions", self.transitions);
    fn("crf.start", self.start);
    fn("crf.end", self.end);
  }
};

bool operator==(const ModelParams& a, const ModelParams& b);

}  // namespace zoneseg
