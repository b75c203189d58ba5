#include "dpautogan/dp/dp_sgd.hpp"

#include <cmath>
#include <stdexcept>

namespace dpag::dp {

void DpSgdConfig::validate() const {
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0))
    throw std::invalid_argument("sampling_rate must lie in (0,1]");
  if (!(clip_norm > 0.0))
    throw std::invalid_argument("clip_norm must be positive");
  if (noise_multiplier < 0.0)
    throw std::invalid_argument("noise_multiplier must be >= 0");
  if (microbatch_size < 1)
    throw std::invalid_argument("microbatch_size must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be positive");
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (noise_multiplier > 0.0 && std::isinf(clip_norm))
    throw std::invalid_argument(
        "clip_norm = inf is only valid for non-private runs");
}

std::vector<std::size_t> sample_batch(std::size_t dataset_size, double q,
                                      Rng& rng) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("sampling rate must lie in (0,1]");
  std::vector<std::size_t> batch;
  for (std::size_t i = 0; i < dataset_size; ++i)
    if (rng.uniform() < q) batch.push_back(i);
  return batch;
}

double l2_norm(const nn::ParamVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void clip_inplace(nn::ParamVector& v, double clip_norm) {
  if (std::isinf(clip_norm)) return;
  if (!(clip_norm > 0.0))
    throw std::invalid_argument("clip norm must be positive");
  const double norm = l2_norm(v);
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& x : v) x *= scale;
  }
}

nn::ParamVector noisy_average(std::vector<nn::ParamVector>& microbatch_grads,
                              double clip_norm, double noise_multiplier,
                              double k_hat, Rng& rng) {
  if (!(k_hat > 0.0)) throw std::invalid_argument("k_hat must be positive");
  if (microbatch_grads.empty())
    throw std::invalid_argument("no microbatch gradients");
  const std::size_t n = microbatch_grads.front().size();
  nn::ParamVector sum(n, 0.0);
  for (nn::ParamVector& g : microbatch_grads) {
    if (g.size() != n) throw std::invalid_argument("gradient shape mismatch");
    clip_inplace(g, clip_norm);
    if (!std::isinf(clip_norm) && l2_norm(g) > clip_norm * (1.0 + 1e-12))
      throw std::logic_error("clipped gradient exceeds the sensitivity bound");
    for (std::size_t i = 0; i < n; ++i) sum[i] += g[i];
  }
  if (noise_multiplier > 0.0) {
    const double sigma = clip_norm * noise_multiplier;
    for (std::size_t i = 0; i < n; ++i) sum[i] += sigma * rng.normal();
  }
  for (double& x : sum) x /= k_hat;
  return sum;
}

bool dp_sgd_step(std::size_t dataset_size, const DpSgdConfig& cfg,
                 const MicrobatchGradFn& grad_fn, nn::ParamVector& params,
                 nn::OptimizerState& opt, Rng& rng) {
  if (dataset_size == 0) throw std::invalid_argument("empty dataset");
  const std::vector<std::size_t> batch =
      sample_batch(dataset_size, cfg.sampling_rate, rng);
  const std::size_t r = cfg.microbatch_size;
  const std::size_t k = batch.size() / r;  // remainder dropped
  if (k == 0) return false;

  std::vector<nn::ParamVector> grads;
  grads.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    grads.push_back(grad_fn(std::span(batch).subspan(j * r, r)));

  const double k_hat = cfg.sampling_rate * static_cast<double>(dataset_size) /
                       static_cast<double>(r);
  nn::ParamVector g = noisy_average(grads, cfg.clip_norm, cfg.noise_multiplier,
                                    k_hat, rng);
  nn::optimizer_step(opt, params, g, cfg.learning_rate);
  return true;
}

}  // namespace dpag::dp
