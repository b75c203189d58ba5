#include "dpautogan/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpag::nn {

namespace {
constexpr double kClamp = 1e-7;
}

BceResult bce_loss(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw std::invalid_argument("bce shape mismatch");
  BceResult r;
  r.grad = Matrix(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < pred.data().size(); ++i) {
    const double raw = pred.data()[i];
    const double x = std::clamp(raw, kClamp, 1.0 - kClamp);
    const double y = target.data()[i];
    r.loss += -y * std::log(x) - (1.0 - y) * std::log(1.0 - x);
    const bool clamped = raw < kClamp || raw > 1.0 - kClamp;
    r.grad.data()[i] = clamped ? 0.0 : (x - y) / (x * (1.0 - x));
  }
  return r;
}

}  // namespace dpag::nn
