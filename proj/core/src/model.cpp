#include "zoneseg/model.hpp"

#include <cmath>

#include "zoneseg/error.hpp"

namespace zoneseg {

LstmWeights LstmWeights::zeros(int input_dim, int hidden) {
  return LstmWeights{Eigen::MatrixXd::Zero(4 * hidden, input_dim),
                     Eigen::MatrixXd::Zero(4 * hidden, hidden),
                     Eigen::VectorXd::Zero(4 * hidden)};
}

ModelParams ModelParams::zeros(const ModelConfig& config) {
  if (config.input_dim <= 0 || config.hidden <= 0 || config.num_labels <= 0) {
    throw ValidationError("model dimensions must be positive (input_dim=" +
                          std::to_string(config.input_dim) + ", hidden=" +
                          std::to_string(config.hidden) + ", labels=" +
                          std::to_string(config.num_labels) + ")");
  }
  if (!(config.dropout_rate >= 0.0 && config.dropout_rate < 1.0)) {
    throw ValidationError("dropout rate must lie in [0, 1)");
  }
  const int k = config.num_labels;
  ModelParams p;
  p.config = config;
  p.forward = LstmWeights::zeros(config.input_dim, config.hidden);
  p.backward = LstmWeights::zeros(config.input_dim, config.hidden);
  p.projection = Eigen::MatrixXd::Zero(2 * config.hidden, k);
  p.projection_bias = Eigen::VectorXd::Zero(k);
  p.transitions = Eigen::MatrixXd::Zero(k, k);
  p.start = Eigen::VectorXd::Zero(k);
  p.end = Eigen::VectorXd::Zero(k);
  return p;
}

ModelParams ModelParams::initialized(const ModelConfig& config, Rng& rng) {
  ModelParams p = zeros(config);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
  p.visit([&](std::string_view name, auto& tensor) {
    if (name.starts_with("crf.")) return;
    for (Eigen::Index i = 0; i < tensor.size(); ++i) {
      tensor.data()[i] = uniform_real(rng, -bound, bound);
    }
  });
  const int h = config.hidden;
  const int forget = static_cast<int>(Gate::kForget) * h;
  p.forward.bias.segment(forget, h).setOnes();
  p.backward.bias.segment(forget, h).setOnes();
  return p;
}

bool ModelParams::all_finite() const {
  bool finite = true;
  visit([&](std::string_view, const auto& tensor) {
    finite = finite && tensor.allFinite();
  });
  return finite;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  visit([&](std::string_view, const auto& tensor) {
    n += static_cast<std::size_t>(tensor.size());
  });
  return n;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  const auto& ca = a.config;
  const auto& cb = b.config;
  if (ca.input_dim != cb.input_dim || ca.hidden != cb.hidden ||
      ca.num_labels != cb.num_labels || ca.dropout_rate != cb.dropout_rate ||
      ca.taxonomy != cb.taxonomy || ca.zones != cb.zones ||
      ca.encoder_kind != cb.encoder_kind) {
    return false;
  }
  std::vector<const double*> left;
  std::vector<Eigen::Index> sizes;
  a.visit([&](std::string_view, const auto& t) {
    left.push_back(t.data());
    sizes.push_back(t.size());
  });
  bool equal = true;
  std::size_t i = 0;
  b.visit([&](std::string_view, const auto& t) {
    if (!equal) return;
    if (t.size() != sizes[i] ||
        !std::equal(t.data(), t.data() + t.size(), left[i])) {
      equal = false;
    }
    ++i;
  });
  return equal;
}

}  // namespace zoneseg
