#pragma once

#include <cstdint>

#include "zoneseg/model.hpp"

namespace zoneseg {

struct RmspropConfig {
  double learning_rate = 0.001;
  double decay = 0.9;
  double epsilon = 1e-8;
};

// v <- decay*v + (1-decay)*g^2;  p <- p - lr*g / (sqrt(v) + eps).
class RmspropOptimizer {
 public:
  RmspropOptimizer(RmspropConfig config, const ModelParams& shape);

  void step(ModelParams& params, const ModelParams& grads);

  const RmspropConfig& config() const { return config_; }
  const ModelParams& accumulators() const { return mean_square_; }

 private:
  RmspropConfig config_;
  ModelParams mean_square_;
};

}  // namespace zoneseg
