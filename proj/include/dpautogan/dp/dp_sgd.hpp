#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dpautogan/nn/optimizer.hpp"
#include "dpautogan/nn/spec.hpp"
#include "dpautogan/rng.hpp"

namespace dpag::dp {

// Sentinel that disables clipping; only valid for non-private runs, the
// accountant rejects it.
inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

struct DpSgdConfig {
  double sampling_rate = 0.0;    // q, per-example Poisson inclusion probability
  double clip_norm = kNoClip;    // C, l2 bound per microbatch gradient
  double noise_multiplier = 0.0; // psi, noise stddev is C*psi per coordinate
  std::size_t microbatch_size = 1;  // r
  double learning_rate = 0.0;    // eta
  nn::OptimizerConfig optimizer;
  std::int64_t iterations = 1;   // T

  void validate() const;
  bool is_private() const { return noise_multiplier > 0.0; }
};

// Each index included independently with probability q; may be empty.
std::vector<std::size_t> sample_batch(std::size_t dataset_size, double q,
                                      Rng& rng);

double l2_norm(const nn::ParamVector& v);

// Scales v to norm min(||v||, C); the zero vector and C = kNoClip are
// passed through unchanged.
void clip_inplace(nn::ParamVector& v, double clip_norm);

// (sum_j Clip(g_j, C) + N(0, C^2 psi^2 I)) / k_hat. The divisor is the
// constant estimate qm/r, never the realized microbatch count; the noise
// scale depends only on C and psi. Asserts every clipped contribution has
// norm <= C. No noise is drawn when psi == 0, keeping non-private
// trajectories aligned with plain SGD.
nn::ParamVector noisy_average(std::vector<nn::ParamVector>& microbatch_grads,
                              double clip_norm, double noise_multiplier,
                              double k_hat, Rng& rng);

// Mean gradient of the loss over the given microbatch rows.
using MicrobatchGradFn =
    std::function<nn::ParamVector(std::span<const std::size_t>)>;

// One private iteration: Poisson-sample a batch, split it into
// floor(|B|/r) microbatches of size r dropping the remainder, average
// per-microbatch gradients, clip, noise, and take one optimizer step.
// Returns false (parameters untouched) when fewer than r examples were
// sampled.
bool dp_sgd_step(std::size_t dataset_size, const DpSgdConfig& cfg,
                 const MicrobatchGradFn& grad_fn, nn::ParamVector& params,
                 nn::OptimizerState& opt, Rng& rng);

}  // namespace dpag::dp
