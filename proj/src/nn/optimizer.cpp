#include "dpautogan/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace dpag::nn {

OptimizerConfig OptimizerConfig::sgd() { return OptimizerConfig{}; }

OptimizerConfig OptimizerConfig::adam(double beta1, double beta2, double eps) {
  OptimizerConfig c;
  c.kind = OptKind::Adam;
  c.beta1 = beta1;
  c.beta2 = beta2;
  c.eps = eps;
  return c;
}

OptimizerConfig OptimizerConfig::rmsprop(double alpha, double eps) {
  OptimizerConfig c;
  c.kind = OptKind::RmsProp;
  c.alpha = alpha;
  c.eps = eps;
  return c;
}

std::string OptimizerConfig::to_string() const {
  switch (kind) {
    case OptKind::Sgd:
      return "sgd";
    case OptKind::Adam:
      return "adam";
    case OptKind::RmsProp:
      return "rmsprop";
  }
  return "sgd";
}

OptimizerConfig OptimizerConfig::parse(const std::string& text) {
  if (text == "sgd") return sgd();
  if (text == "adam") return adam();
  if (text == "rmsprop") return rmsprop();
  throw std::invalid_argument("unknown optimizer: " + text);
}

void optimizer_step(OptimizerState& state, ParamVector& params,
                    const ParamVector& grad, double lr) {
  if (params.size() != grad.size())
    throw std::invalid_argument("optimizer shape mismatch");
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  const std::size_t n = params.size();
  state.step_count += 1;

  switch (state.cfg.kind) {
    case OptKind::Sgd: {
      for (std::size_t i = 0; i < n; ++i) params[i] -= lr * grad[i];
      break;
    }
    case OptKind::Adam: {
      if (state.m1.size() != n) state.m1.assign(n, 0.0);
      if (state.m2.size() != n) state.m2.assign(n, 0.0);
      const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
      for (std::size_t i = 0; i < n; ++i) {
        state.m1[i] = b1 * state.m1[i] + (1.0 - b1) * grad[i];
        state.m2[i] = b2 * state.m2[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = state.m1[i] / c1;
        const double vhat = state.m2[i] / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
      }
      break;
    }
    case OptKind::RmsProp: {
      if (state.m2.size() != n) state.m2.assign(n, 0.0);
      const double a = state.cfg.alpha;
      for (std::size_t i = 0; i < n; ++i) {
        state.m2[i] = a * state.m2[i] + (1.0 - a) * grad[i] * grad[i];
        params[i] -= lr * grad[i] / (std::sqrt(state.m2[i]) + state.cfg.eps);
      }
      break;
    }
  }
}

}  // namespace dpag::nn
