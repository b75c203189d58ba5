#pragma once

#include "dpautogan/matrix.hpp"

namespace dpag::nn {

struct BceResult {
  double loss = 0.0;
  Matrix grad;  // d loss / d pred
};

// Binary cross entropy summed over all entries:
//   -sum y*log(x) - sum (1-y)*log(1-x).
// Predictions are clamped to [1e-7, 1-1e-7] before the logs; the gradient is
// taken at the clamped point (zero outside the clamp range).
BceResult bce_loss(const Matrix& pred, const Matrix& target);

}  // namespace dpag::nn
