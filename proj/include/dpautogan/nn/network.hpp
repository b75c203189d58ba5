#pragma once

#include <vector>

#include "dpautogan/matrix.hpp"
#include "dpautogan/nn/spec.hpp"

namespace dpag::nn {

enum class Mode { Train, Eval };

// Batchnorm running statistics, one entry per batchnorm layer in spec order.
// Mutable training state; not part of the trainable ParamVector.
struct BatchNormRunning {
  std::vector<double> mean;
  std::vector<double> var;
};

struct NetState {
  std::vector<BatchNormRunning> bn;
};

NetState make_state(const MlpSpec& spec);

// Activation record from a forward pass, sufficient to run backward.
struct Tape {
  Matrix input;
  std::vector<Matrix> raw;        // each layer's own output
  std::vector<Matrix> effective;  // output after residual additions
  struct BnAux {
    Matrix xhat;
    std::vector<double> inv_std;
  };
  std::vector<BnAux> bn;  // per batchnorm layer, in spec order
  Mode mode = Mode::Train;
};

struct BackwardResult {
  ParamVector param_grad;
  Matrix input_grad;
};

// Runs the network on a batch (rows are examples). In train mode batchnorm
// normalizes with batch statistics and updates the running statistics in
// `state`; in eval mode it reads `state` and mutates nothing. Pass `tape`
// to record activations for backward (train mode pairs with gradient use).
Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& batch, Mode mode, NetState& state,
               Tape* tape = nullptr);

// Exact gradients of sum_b <output_grad_b, output_b> with respect to the
// parameters and the input, for the pass recorded in `tape`.
BackwardResult backward(const MlpSpec& spec, const ParamVector& params,
                        const Tape& tape, const Matrix& output_grad);

}  // namespace dpag::nn
