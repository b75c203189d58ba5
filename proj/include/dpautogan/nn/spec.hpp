#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpautogan/rng.hpp"

namespace dpag::nn {

enum class LayerKind { Dense, Tanh, Sigmoid, LeakyRelu, BatchNorm };

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  // Dense
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  bool bias = true;
  // LeakyRelu
  double slope = 0.2;
  // BatchNorm1d
  std::size_t dim = 0;
  double momentum = 0.1;
  double epsilon = 1e-5;

  static LayerSpec dense(std::size_t in, std::size_t out, bool bias = true);
  static LayerSpec tanh();
  static LayerSpec sigmoid();
  static LayerSpec leaky_relu(double slope = 0.2);
  static LayerSpec batchnorm(std::size_t dim, double momentum = 0.1,
                             double epsilon = 1e-5);
};

// Output of layer `from` is added elementwise to the output of layer `to`.
// Both outputs must have the same width and from < to.
struct ResidualLink {
  std::size_t from = 0;
  std::size_t to = 0;
};

// Flat trainable parameter vector; layout defined by ParamLayout below.
using ParamVector = std::vector<double>;

struct MlpSpec {
  std::vector<LayerSpec> layers;
  std::vector<ResidualLink> residual_links;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t param_count() const;

  // Throws std::invalid_argument if dims do not chain, a leaky-relu slope is
  // outside (0,1), a batchnorm epsilon is not positive, or a residual link
  // is malformed.
  void validate() const;

  std::string to_json() const;
  static MlpSpec from_json(const std::string& text);
};

// Per-tensor slices of the flat parameter vector, in layer order:
// dense -> W [in*out] then b [out]; batchnorm -> gamma [dim] then beta [dim].
struct ParamSlice {
  std::size_t layer = 0;
  std::size_t offset = 0;
  std::size_t count = 0;
};

struct ParamLayout {
  std::vector<ParamSlice> slices;
  std::size_t total = 0;
};

ParamLayout param_layout(const MlpSpec& spec);

// Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) for dense weights and biases;
// batchnorm scale 1, shift 0.
ParamVector init_params(const MlpSpec& spec, Rng& rng);

// Little-endian f64 array with a layout version tag.
void write_params(std::ostream& out, const ParamVector& params);
ParamVector read_params(std::istream& in);

}  // namespace dpag::nn
