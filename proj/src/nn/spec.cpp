#include "dpautogan/nn/spec.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dpag::nn {

using nlohmann::json;

LayerSpec LayerSpec::dense(std::size_t in, std::size_t out, bool bias) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.in_dim = in;
  s.out_dim = out;
  s.bias = bias;
  return s;
}
LayerSpec LayerSpec::tanh() {
  LayerSpec s;
  s.kind = LayerKind::Tanh;
  return s;
}
LayerSpec LayerSpec::sigmoid() {
  LayerSpec s;
  s.kind = LayerKind::Sigmoid;
  return s;
}
LayerSpec LayerSpec::leaky_relu(double slope) {
  LayerSpec s;
  s.kind = LayerKind::LeakyRelu;
  s.slope = slope;
  return s;
}
LayerSpec LayerSpec::batchnorm(std::size_t dim, double momentum, double epsilon) {
  LayerSpec s;
  s.kind = LayerKind::BatchNorm;
  s.dim = dim;
  s.momentum = momentum;
  s.epsilon = epsilon;
  return s;
}

namespace {

// Width of each layer's output, also validating the chain.
std::vector<std::size_t> layer_widths(const MlpSpec& spec) {
  std::vector<std::size_t> widths;
  widths.reserve(spec.layers.size());
  std::size_t w = 0;
  bool known = false;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    switch (l.kind) {
      case LayerKind::Dense:
        if (l.in_dim == 0 || l.out_dim == 0)
          throw std::invalid_argument("dense layer with zero dimension");
        if (known && w != l.in_dim)
          throw std::invalid_argument("dense in_dim " + std::to_string(l.in_dim) +
                                      " does not chain from width " +
                                      std::to_string(w) + " at layer " +
                                      std::to_string(i));
        w = l.out_dim;
        known = true;
        break;
      case LayerKind::BatchNorm:
        if (l.dim == 0) throw std::invalid_argument("batchnorm with zero dim");
        if (l.epsilon <= 0.0)
          throw std::invalid_argument("batchnorm epsilon must be > 0");
        if (known && w != l.dim)
          throw std::invalid_argument("batchnorm dim does not match width at layer " +
                                      std::to_string(i));
        w = l.dim;
        known = true;
        break;
      case LayerKind::LeakyRelu:
        if (!(l.slope > 0.0 && l.slope < 1.0))
          throw std::invalid_argument("leaky_relu slope must lie in (0,1)");
        [[fallthrough]];
      case LayerKind::Tanh:
      case LayerKind::Sigmoid:
        if (!known)
          throw std::invalid_argument(
              "activation before any width-defining layer");
        break;
    }
    widths.push_back(w);
  }
  return widths;
}

}  // namespace

std::size_t MlpSpec::input_dim() const {
  for (const LayerSpec& l : layers) {
    if (l.kind == LayerKind::Dense) return l.in_dim;
    if (l.kind == LayerKind::BatchNorm) return l.dim;
  }
  throw std::invalid_argument("network has no width-defining layer");
}

std::size_t MlpSpec::output_dim() const {
  auto widths = layer_widths(*this);
  if (widths.empty()) throw std::invalid_argument("empty network");
  return widths.back();
}

std::size_t MlpSpec::param_count() const { return param_layout(*this).total; }

void MlpSpec::validate() const {
  if (layers.empty()) throw std::invalid_argument("empty network");
  auto widths = layer_widths(*this);
  for (const ResidualLink& link : residual_links) {
    if (link.from >= link.to || link.to >= layers.size())
      throw std::invalid_argument("residual link indices must satisfy from < to < layer count");
    if (widths[link.from] != widths[link.to])
      throw std::invalid_argument("residual link joins outputs of unequal width");
  }
}

ParamLayout param_layout(const MlpSpec& spec) {
  ParamLayout layout;
  std::size_t off = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    if (l.kind == LayerKind::Dense) {
      layout.slices.push_back({i, off, l.in_dim * l.out_dim});
      off += l.in_dim * l.out_dim;
      if (l.bias) {
        layout.slices.push_back({i, off, l.out_dim});
        off += l.out_dim;
      }
    } else if (l.kind == LayerKind::BatchNorm) {
      layout.slices.push_back({i, off, l.dim});
      off += l.dim;
      layout.slices.push_back({i, off, l.dim});
      off += l.dim;
    }
  }
  layout.total = off;
  return layout;
}

ParamVector init_params(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  const ParamLayout layout = param_layout(spec);
  ParamVector p(layout.total, 0.0);
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    const ParamSlice& slice = layout.slices[s];
    const LayerSpec& l = spec.layers[slice.layer];
    if (l.kind == LayerKind::Dense) {
      const double bound = std::sqrt(1.0 / static_cast<double>(l.in_dim));
      for (std::size_t i = 0; i < slice.count; ++i)
        p[slice.offset + i] = (2.0 * rng.uniform() - 1.0) * bound;
    } else if (l.kind == LayerKind::BatchNorm) {
      const bool is_gamma = s == 0 || layout.slices[s - 1].layer != slice.layer;
      if (is_gamma)
        for (std::size_t i = 0; i < slice.count; ++i) p[slice.offset + i] = 1.0;
      // beta stays 0
    }
  }
  return p;
}

std::string MlpSpec::to_json() const {
  json j;
  j["layers"] = json::array();
  for (const LayerSpec& l : layers) {
    json e;
    switch (l.kind) {
      case LayerKind::Dense:
        e["kind"] = "dense";
        e["in"] = l.in_dim;
        e["out"] = l.out_dim;
        e["bias"] = l.bias;
        break;
      case LayerKind::Tanh:
        e["kind"] = "tanh";
        break;
      case LayerKind::Sigmoid:
        e["kind"] = "sigmoid";
        break;
      case LayerKind::LeakyRelu:
        e["kind"] = "leaky_relu";
        e["slope"] = l.slope;
        break;
      case LayerKind::BatchNorm:
        e["kind"] = "batchnorm1d";
        e["dim"] = l.dim;
        e["momentum"] = l.momentum;
        e["epsilon"] = l.epsilon;
        break;
    }
    j["layers"].push_back(e);
  }
  if (!residual_links.empty()) {
    j["residual_links"] = json::array();
    for (const ResidualLink& r : residual_links)
      j["residual_links"].push_back({{"from", r.from}, {"to", r.to}});
  }
  return j.dump();
}

MlpSpec MlpSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  MlpSpec spec;
  for (const json& e : j.at("layers")) {
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "dense") {
      spec.layers.push_back(LayerSpec::dense(e.at("in").get<std::size_t>(),
                                             e.at("out").get<std::size_t>(),
                                             e.value("bias", true)));
    } else if (kind == "tanh") {
      spec.layers.push_back(LayerSpec::tanh());
    } else if (kind == "sigmoid") {
      spec.layers.push_back(LayerSpec::sigmoid());
    } else if (kind == "leaky_relu") {
      spec.layers.push_back(LayerSpec::leaky_relu(e.value("slope", 0.2)));
    } else if (kind == "batchnorm1d") {
      spec.layers.push_back(LayerSpec::batchnorm(e.at("dim").get<std::size_t>(),
                                                 e.value("momentum", 0.1),
                                                 e.value("epsilon", 1e-5)));
    } else {
      throw std::invalid_argument("unknown layer kind: " + kind);
    }
  }
  if (j.contains("residual_links")) {
    for (const json& e : j["residual_links"])
      spec.residual_links.push_back(
          {e.at("from").get<std::size_t>(), e.at("to").get<std::size_t>()});
  }
  spec.validate();
  return spec;
}

namespace {
constexpr char kParamMagic[8] = {'D', 'P', 'A', 'G', 'P', 'V', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated parameter stream");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}
}  // namespace

void write_params(std::ostream& out, const ParamVector& params) {
  out.write(kParamMagic, 8);
  write_u64(out, params.size());
  for (double v : params) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
  }
}

ParamVector read_params(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kParamMagic, 8) != 0)
    throw std::runtime_error("bad parameter stream tag");
  const std::uint64_t n = read_u64(in);
  ParamVector p(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t bits = read_u64(in);
    std::memcpy(&p[i], &bits, 8);
  }
  return p;
}

}  // namespace dpag::nn
