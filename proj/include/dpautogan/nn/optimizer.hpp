#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpautogan/nn/spec.hpp"

namespace dpag::nn {

enum class OptKind { Sgd, Adam, RmsProp };

struct OptimizerConfig {
  OptKind kind = OptKind::Sgd;
  double beta1 = 0.9;    // adam
  double beta2 = 0.999;  // adam
  double alpha = 0.99;   // rmsprop smoothing
  double eps = 1e-8;

  static OptimizerConfig sgd();
  static OptimizerConfig adam(double beta1 = 0.9, double beta2 = 0.999,
                              double eps = 1e-8);
  static OptimizerConfig rmsprop(double alpha = 0.99, double eps = 1e-8);

  std::string to_string() const;
  static OptimizerConfig parse(const std::string& text);
};

struct OptimizerState {
  OptimizerConfig cfg;
  std::vector<double> m1;  // first moment (adam)
  std::vector<double> m2;  // second moment (adam, rmsprop)
  std::int64_t step_count = 0;

  explicit OptimizerState(OptimizerConfig c = {}) : cfg(c) {}
};

// One descent step: params <- params - update(grad). Moment buffers are
// lazily sized to the parameter count on the first step.
void optimizer_step(OptimizerState& state, ParamVector& params,
                    const ParamVector& grad, double lr);

}  // namespace dpag::nn
