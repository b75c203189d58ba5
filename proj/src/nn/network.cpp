#include "dpautogan/nn/network.hpp"

#include <cmath>
#include <stdexcept>

namespace dpag::nn {

namespace {

bool all_finite(const Matrix& m) {
  for (double v : m.data())
    if (!std::isfinite(v)) return false;
  return true;
}

// Index of the batchnorm layer among batchnorm layers only.
std::size_t bn_ordinal(const MlpSpec& spec, std::size_t layer) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < layer; ++i)
    if (spec.layers[i].kind == LayerKind::BatchNorm) ++k;
  return k;
}

}  // namespace

NetState make_state(const MlpSpec& spec) {
  NetState st;
  for (const LayerSpec& l : spec.layers) {
    if (l.kind == LayerKind::BatchNorm) {
      BatchNormRunning r;
      r.mean.assign(l.dim, 0.0);
      r.var.assign(l.dim, 1.0);
      st.bn.push_back(std::move(r));
    }
  }
  return st;
}

Matrix forward(const MlpSpec& spec, const ParamVector& params,
               const Matrix& batch, Mode mode, NetState& state, Tape* tape) {
  spec.validate();
  const ParamLayout layout = param_layout(spec);
  if (params.size() != layout.total)
    throw std::invalid_argument("parameter vector length mismatch");
  if (batch.cols() != spec.input_dim())
    throw std::invalid_argument("batch width does not match network input");
  if (!all_finite(batch)) throw std::invalid_argument("non-finite input");

  const std::size_t b = batch.rows();
  std::size_t slice_idx = 0;

  if (tape) {
    *tape = Tape{};
    tape->input = batch;
    tape->mode = mode;
    tape->raw.resize(spec.layers.size());
    tape->effective.resize(spec.layers.size());
  }

  std::vector<Matrix> effective(spec.layers.size());
  Matrix cur = batch;

  for (std::size_t li = 0; li < spec.layers.size(); ++li) {
    const LayerSpec& l = spec.layers[li];
    Matrix out;
    switch (l.kind) {
      case LayerKind::Dense: {
        const ParamSlice w = layout.slices[slice_idx++];
        const ParamSlice bs = l.bias ? layout.slices[slice_idx++] : ParamSlice{};
        out = Matrix(b, l.out_dim);
        for (std::size_t i = 0; i < b; ++i) {
          const double* x = cur.row(i);
          double* y = out.row(i);
          if (l.bias)
            for (std::size_t j = 0; j < l.out_dim; ++j)
              y[j] = params[bs.offset + j];
          for (std::size_t k = 0; k < l.in_dim; ++k) {
            const double xk = x[k];
            const double* wrow = &params[w.offset + k * l.out_dim];
            for (std::size_t j = 0; j < l.out_dim; ++j) y[j] += xk * wrow[j];
          }
        }
        break;
      }
      case LayerKind::Tanh: {
        out = cur;
        for (double& v : out.data()) v = std::tanh(v);
        break;
      }
      case LayerKind::Sigmoid: {
        out = cur;
        for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
        break;
      }
      case LayerKind::LeakyRelu: {
        out = cur;
        for (double& v : out.data())
          if (v < 0.0) v *= l.slope;
        break;
      }
      case LayerKind::BatchNorm: {
        const ParamSlice gs = layout.slices[slice_idx++];
        const ParamSlice be = layout.slices[slice_idx++];
        const std::size_t ord = bn_ordinal(spec, li);
        BatchNormRunning& run = state.bn.at(ord);
        out = Matrix(b, l.dim);
        Tape::BnAux aux;
        aux.inv_std.resize(l.dim);
        aux.xhat = Matrix(b, l.dim);
        if (mode == Mode::Train) {
          for (std::size_t j = 0; j < l.dim; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < b; ++i) mean += cur(i, j);
            mean /= static_cast<double>(b);
            double var = 0.0;
            for (std::size_t i = 0; i < b; ++i) {
              const double d = cur(i, j) - mean;
              var += d * d;
            }
            var /= static_cast<double>(b);
            const double inv = 1.0 / std::sqrt(var + l.epsilon);
            aux.inv_std[j] = inv;
            for (std::size_t i = 0; i < b; ++i) {
              const double xh = (cur(i, j) - mean) * inv;
              aux.xhat(i, j) = xh;
              out(i, j) = params[gs.offset + j] * xh + params[be.offset + j];
            }
            const double unbiased =
                b > 1 ? var * static_cast<double>(b) / static_cast<double>(b - 1)
                      : var;
            run.mean[j] = (1.0 - l.momentum) * run.mean[j] + l.momentum * mean;
            run.var[j] = (1.0 - l.momentum) * run.var[j] + l.momentum * unbiased;
          }
        } else {
          for (std::size_t j = 0; j < l.dim; ++j) {
            const double inv = 1.0 / std::sqrt(run.var[j] + l.epsilon);
            aux.inv_std[j] = inv;
            for (std::size_t i = 0; i < b; ++i) {
              const double xh = (cur(i, j) - run.mean[j]) * inv;
              aux.xhat(i, j) = xh;
              out(i, j) = params[gs.offset + j] * xh + params[be.offset + j];
            }
          }
        }
        if (tape) tape->bn.push_back(std::move(aux));
        break;
      }
    }

    if (tape) tape->raw[li] = out;
    for (const ResidualLink& link : spec.residual_links) {
      if (link.to == li) {
        const Matrix& src = effective[link.from];
        for (std::size_t i = 0; i < out.data().size(); ++i)
          out.data()[i] += src.data()[i];
      }
    }
    effective[li] = out;
    if (tape) tape->effective[li] = out;
    cur = std::move(out);
  }

  if (!all_finite(cur)) throw std::runtime_error("non-finite network output");
  return cur;
}

BackwardResult backward(const MlpSpec& spec, const ParamVector& params,
                        const Tape& tape, const Matrix& output_grad) {
  const ParamLayout layout = param_layout(spec);
  if (params.size() != layout.total)
    throw std::invalid_argument("parameter vector length mismatch");
  if (tape.raw.size() != spec.layers.size())
    throw std::invalid_argument("tape does not match spec");
  const std::size_t n_layers = spec.layers.size();
  const std::size_t b = tape.input.rows();
  if (output_grad.rows() != b ||
      output_grad.cols() != tape.effective.back().cols())
    throw std::invalid_argument("output_grad shape mismatch");

  BackwardResult res;
  res.param_grad.assign(layout.total, 0.0);

  // Gradient with respect to each layer's effective output.
  std::vector<Matrix> grad(n_layers);
  grad[n_layers - 1] = output_grad;

  // Slice index of the first parameter slice of each layer.
  std::vector<std::size_t> first_slice(n_layers, layout.slices.size());
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    const std::size_t li = layout.slices[s].layer;
    if (s == 0 || layout.slices[s - 1].layer != li) first_slice[li] = s;
  }

  std::size_t bn_seen = tape.bn.size();

  for (std::size_t li = n_layers; li-- > 0;) {
    if (grad[li].empty())
      grad[li] = Matrix(b, tape.effective[li].cols());

    // Residual additions operate on effective outputs, so the gradient at
    // this output also flows to every source linked into it.
    for (const ResidualLink& link : spec.residual_links) {
      if (link.to == li) {
        if (grad[link.from].empty())
          grad[link.from] = Matrix(b, tape.effective[link.from].cols());
        for (std::size_t i = 0; i < grad[li].data().size(); ++i)
          grad[link.from].data()[i] += grad[li].data()[i];
      }
    }

    const Matrix& dy = grad[li];
    const Matrix& in = li == 0 ? tape.input : tape.effective[li - 1];
    Matrix dx(b, in.cols());
    const LayerSpec& l = spec.layers[li];

    switch (l.kind) {
      case LayerKind::Dense: {
        const std::size_t s0 = first_slice[li];
        const ParamSlice w = layout.slices[s0];
        for (std::size_t i = 0; i < b; ++i) {
          const double* x = in.row(i);
          const double* g = dy.row(i);
          double* dxr = dx.row(i);
          for (std::size_t k = 0; k < l.in_dim; ++k) {
            const double* wrow = &params[w.offset + k * l.out_dim];
            double* dwrow = &res.param_grad[w.offset + k * l.out_dim];
            double acc = 0.0;
            const double xk = x[k];
            for (std::size_t j = 0; j < l.out_dim; ++j) {
              dwrow[j] += xk * g[j];
              acc += wrow[j] * g[j];
            }
            dxr[k] = acc;
          }
          if (l.bias) {
            const ParamSlice bs = layout.slices[s0 + 1];
            for (std::size_t j = 0; j < l.out_dim; ++j)
              res.param_grad[bs.offset + j] += g[j];
          }
        }
        break;
      }
      case LayerKind::Tanh: {
        const Matrix& y = tape.raw[li];
        for (std::size_t i = 0; i < dx.data().size(); ++i)
          dx.data()[i] = dy.data()[i] * (1.0 - y.data()[i] * y.data()[i]);
        break;
      }
      case LayerKind::Sigmoid: {
        const Matrix& y = tape.raw[li];
        for (std::size_t i = 0; i < dx.data().size(); ++i)
          dx.data()[i] = dy.data()[i] * y.data()[i] * (1.0 - y.data()[i]);
        break;
      }
      case LayerKind::LeakyRelu: {
        for (std::size_t i = 0; i < dx.data().size(); ++i)
          dx.data()[i] =
              dy.data()[i] * (in.data()[i] > 0.0 ? 1.0 : l.slope);
        break;
      }
      case LayerKind::BatchNorm: {
        const std::size_t s0 = first_slice[li];
        const ParamSlice gs = layout.slices[s0];
        const ParamSlice be = layout.slices[s0 + 1];
        const Tape::BnAux& aux = tape.bn.at(--bn_seen);
        const double bn = static_cast<double>(b);
        for (std::size_t j = 0; j < l.dim; ++j) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (std::size_t i = 0; i < b; ++i) {
            sum_dy += dy(i, j);
            sum_dy_xhat += dy(i, j) * aux.xhat(i, j);
          }
          res.param_grad[gs.offset + j] += sum_dy_xhat;
          res.param_grad[be.offset + j] += sum_dy;
          const double gamma = params[gs.offset + j];
          if (tape.mode == Mode::Train) {
            for (std::size_t i = 0; i < b; ++i)
              dx(i, j) = gamma * aux.inv_std[j] *
                         (dy(i, j) - sum_dy / bn -
                          aux.xhat(i, j) * sum_dy_xhat / bn);
          } else {
            for (std::size_t i = 0; i < b; ++i)
              dx(i, j) = gamma * aux.inv_std[j] * dy(i, j);
          }
        }
        break;
      }
    }

    if (li == 0) {
      res.input_grad = std::move(dx);
    } else {
      if (grad[li - 1].empty()) {
        grad[li - 1] = std::move(dx);
      } else {
        for (std::size_t i = 0; i < dx.data().size(); ++i)
          grad[li - 1].data()[i] += dx.data()[i];
      }
    }
  }
  return res;
}

}  // namespace dpag::nn
