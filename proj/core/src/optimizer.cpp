#include "zoneseg/optimizer.hpp"

#include <cmath>
#include <vector>

#include "zoneseg/error.hpp"

namespace zoneseg {

RmspropOptimizer::RmspropOptimizer(RmspropConfig config, const ModelParams& shape)
    : config_(config), mean_square_(shape.zeros_like()) {
  if (!(config_.learning_rate > 0.0) || !(config_.decay >= 0.0 && config_.decay < 1.0) ||
      !(config_.epsilon > 0.0)) {
    throw ValidationError("invalid RMSprop hyperparameters");
  }
}

void RmspropOptimizer::step(ModelParams& params, const ModelParams& grads) {
  std::vector<double*> param_data;
  std::vector<const double*> grad_data;
  std::vector<Eigen::Index> sizes;
  params.visit([&](std::string_view, auto& t) {
    param_data.push_back(t.data());
    sizes.push_back(t.size());
  });
  grads.visit([&](std::string_view, const auto& t) { grad_data.push_back(t.data()); });

  const double decay = config_.decay;
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  std::size_t index = 0;
  mean_square_.visit([&](std::string_view name, auto& v) {
    if (v.size() != sizes[index]) {
      throw DimensionMismatchError("gradient shape differs for " + std::string(name));
    }
    double* p = param_data[index];
    const double* g = grad_data[index];
    double* acc = v.data();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      acc[i] = decay * acc[i] + (1.0 - decay) * g[i] * g[i];
      p[i] -= lr * g[i] / (std::sqrt(acc[i]) + eps);
    }
    ++index;
  });
}

}  // namespace zoneseg
