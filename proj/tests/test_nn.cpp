#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "dpautogan/nn/loss.hpp"
#include "dpautogan/nn/network.hpp"
#include "dpautogan/nn/optimizer.hpp"
#include "dpautogan/nn/spec.hpp"
#include "test_util.hpp"

using namespace dpag;
using namespace dpag::nn;

namespace {

MlpSpec dense_only(std::size_t in, std::size_t out, bool bias = true) {
  MlpSpec s;
  s.layers.push_back(LayerSpec::dense(in, out, bias));
  return s;
}

}  // namespace

TEST_CASE("dense identity passes input through") {
  MlpSpec spec = dense_only(2, 2);
  ParamVector p(spec.param_count(), 0.0);
  p[0] = 1.0;  // W(0,0)
  p[3] = 1.0;  // W(1,1)
  NetState st = make_state(spec);
  Matrix x = Matrix::from_rows({{1.0, 2.0}});
  Matrix y = forward(spec, p, x, Mode::Eval, st);
  CHECK(y(0, 0) == doctest::Approx(1.0));
  CHECK(y(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("sigmoid of zero is one half") {
  MlpSpec spec = dense_only(1, 1);
  spec.layers.push_back(LayerSpec::sigmoid());
  ParamVector p(spec.param_count(), 0.0);
  NetState st = make_state(spec);
  Matrix y = forward(spec, p, Matrix::from_rows({{0.0}}), Mode::Eval, st);
  CHECK(y(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("three layer net matches per-example scalar evaluation") {
  // Per-example oracle: plain loops over scalars, no batching.
  MlpSpec spec;
  spec.layers.push_back(LayerSpec::dense(3, 5));
  spec.layers.push_back(LayerSpec::tanh());
  spec.layers.push_back(LayerSpec::dense(5, 4));
  spec.layers.push_back(LayerSpec::leaky_relu(0.2));
  spec.layers.push_back(LayerSpec::dense(4, 2));

  Rng rng(11);
  ParamVector p = init_params(spec, rng);
  Matrix x = testutil::random_matrix(4, 3, rng);
  NetState st = make_state(spec);
  Matrix y = forward(spec, p, x, Mode::Eval, st);

  const ParamLayout layout = param_layout(spec);
  for (std::size_t row = 0; row < 4; ++row) {
    std::vector<double> v(x.row(row), x.row(row) + 3);
    std::size_t s = 0;
    for (const LayerSpec& l : spec.layers) {
      if (l.kind == LayerKind::Dense) {
        const ParamSlice w = layout.slices[s++];
        const ParamSlice b = layout.slices[s++];
        std::vector<double> out(l.out_dim, 0.0);
        for (std::size_t j = 0; j < l.out_dim; ++j) {
          double acc = p[b.offset + j];
          for (std::size_t k = 0; k < l.in_dim; ++k)
            acc += v[k] * p[w.offset + k * l.out_dim + j];
          out[j] = acc;
        }
        v = out;
      } else if (l.kind == LayerKind::Tanh) {
        for (double& t : v) t = std::tanh(t);
      } else if (l.kind == LayerKind::LeakyRelu) {
        for (double& t : v)
          if (t < 0) t *= l.slope;
      }
    }
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(y(row, j) - v[j]) < 1e-12);
  }
}

TEST_CASE("forward is deterministic and eval mode is pure") {
  MlpSpec spec;
  spec.layers.push_back(LayerSpec::dense(4, 6, false));
  spec.layers.push_back(LayerSpec::batchnorm(6));
  spec.layers.push_back(LayerSpec::leaky_relu(0.2));
  Rng rng(5);
  ParamVector p = init_params(spec, rng);
  Matrix x = testutil::random_matrix(8, 4, rng);

  NetState st1 = make_state(spec);
  NetState st2 = make_state(spec);
  Matrix a = forward(spec, p, x, Mode::Train, st1);
  Matrix b = forward(spec, p, x, Mode::Train, st2);
  CHECK(a == b);
  CHECK(st1.bn[0].mean == st2.bn[0].mean);

  // Eval leaves running statistics untouched.
  const std::vector<double> mean_before = st1.bn[0].mean;
  const std::vector<double> var_before = st1.bn[0].var;
  forward(spec, p, x, Mode::Eval, st1);
  CHECK(st1.bn[0].mean == mean_before);
  CHECK(st1.bn[0].var == var_before);
}

TEST_CASE("batchnorm train output is standardized over the batch") {
  MlpSpec spec;
  spec.layers.push_back(LayerSpec::dense(3, 5));
  spec.layers.push_back(LayerSpec::batchnorm(5));
  Rng rng(7);
  ParamVector p = init_params(spec, rng);
  Matrix x = testutil::random_matrix(32, 3, rng, 2.0);
  NetState st = make_state(spec);
  Matrix y = forward(spec, p, x, Mode::Train, st);
  for (std::size_t j = 0; j < 5; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 32; ++i) mean += y(i, j);
    mean /= 32.0;
    double var = 0.0;
    for (std::size_t i = 0; i < 32; ++i) var += (y(i, j) - mean) * (y(i, j) - mean);
    var /= 32.0;
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-3));  // epsilon-induced shrink
  }
}

TEST_CASE("linear layer gradient is the outer product") {
  MlpSpec spec = dense_only(3, 2, false);
  Rng rng(3);
  ParamVector p = init_params(spec, rng);
  Matrix x = Matrix::from_rows({{1.0, -2.0, 0.5}});
  NetState st = make_state(spec);
  Tape tape;
  forward(spec, p, x, Mode::Train, st, &tape);
  Matrix g = Matrix::from_rows({{0.3, -0.7}});
  BackwardResult r = backward(spec, p, tape, g);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(r.param_grad[k * 2 + j] == doctest::Approx(x(0, k) * g(0, j)));
}

TEST_CASE("zero output gradient gives zero parameter gradient") {
  MlpSpec spec;
  spec.layers.push_back(LayerSpec::dense(4, 4));
  spec.layers.push_back(LayerSpec::tanh());
  Rng rng(9);
  ParamVector p = init_params(spec, rng);
  Matrix x = testutil::random_matrix(3, 4, rng);
  NetState st = make_state(spec);
  Tape tape;
  forward(spec, p, x, Mode::Train, st, &tape);
  BackwardResult r = backward(spec, p, tape, Matrix(3, 4, 0.0));
  for (double v : r.param_grad) CHECK(v == 0.0);
}

TEST_CASE("gradients match central finite differences across layer kinds") {
  Rng rng(1234);

  SUBCASE("dense tanh sigmoid stack") {
    MlpSpec spec;
    spec.layers.push_back(LayerSpec::dense(5, 4));
    spec.layers.push_back(LayerSpec::tanh());
    spec.layers.push_back(LayerSpec::dense(4, 3));
    spec.layers.push_back(LayerSpec::sigmoid());
    ParamVector p = init_params(spec, rng);
    Matrix x = testutil::random_matrix(6, 5, rng);
    Matrix c = testutil::random_matrix(6, 3, rng);
    CHECK(testutil::gradient_check(spec, p, x, c));
  }

  SUBCASE("batchnorm and leaky relu") {
    MlpSpec spec;
    spec.layers.push_back(LayerSpec::dense(4, 6, false));
    spec.layers.push_back(LayerSpec::batchnorm(6));
    spec.layers.push_back(LayerSpec::leaky_relu(0.2));
    spec.layers.push_back(LayerSpec::dense(6, 2));
    ParamVector p = init_params(spec, rng);
    Matrix x = testutil::random_matrix(7, 4, rng);
    Matrix c = testutil::random_matrix(7, 2, rng);
    CHECK(testutil::gradient_check(spec, p, x, c));
  }

  SUBCASE("residual generator block structure") {
    MlpSpec spec;
    spec.layers.push_back(LayerSpec::dense(6, 6, false));
    spec.layers.push_back(LayerSpec::batchnorm(6));
    spec.layers.push_back(LayerSpec::leaky_relu(0.2));
    spec.layers.push_back(LayerSpec::dense(6, 6, false));
    spec.layers.push_back(LayerSpec::batchnorm(6));
    spec.layers.push_back(LayerSpec::leaky_relu(0.2));
    spec.layers.push_back(LayerSpec::dense(6, 3, false));
    spec.layers.push_back(LayerSpec::batchnorm(3));
    spec.layers.push_back(LayerSpec::leaky_relu(0.2));
    spec.residual_links.push_back({2, 5});
    spec.validate();
    ParamVector p = init_params(spec, rng);
    Matrix x = testutil::random_matrix(5, 6, rng);
    Matrix c = testutil::random_matrix(5, 3, rng);
    CHECK(testutil::gradient_check(spec, p, x, c));
  }
}

TEST_CASE("bce loss values") {
  SUBCASE("pred equals target at one half") {
    BceResult r = bce_loss(Matrix::from_rows({{0.5}}), Matrix::from_rows({{0.5}}));
    CHECK(r.loss == doctest::Approx(-std::log(0.5)));
  }
  SUBCASE("confident correct prediction approaches zero loss") {
    BceResult r = bce_loss(Matrix::from_rows({{1.0 - 1e-9}}),
                           Matrix::from_rows({{1.0}}));
    CHECK(r.loss < 1e-6);
  }
  SUBCASE("two coordinate example") {
    BceResult r = bce_loss(Matrix::from_rows({{0.9, 0.2}}),
                           Matrix::from_rows({{1.0, 0.0}}));
    CHECK(r.loss == doctest::Approx(-std::log(0.9) - std::log(0.8)));
    CHECK(r.grad(0, 0) == doctest::Approx((0.9 - 1.0) / (0.9 * 0.1)));
    CHECK(r.grad(0, 1) == doctest::Approx((0.2 - 0.0) / (0.2 * 0.8)));
  }
}

TEST_CASE("optimizer updates") {
  SUBCASE("sgd definition") {
    OptimizerState st(OptimizerConfig::sgd());
    ParamVector p{1.0};
    optimizer_step(st, p, ParamVector{2.0}, 0.1);
    CHECK(p[0] == doctest::Approx(0.8));
    CHECK(st.step_count == 1);
  }
  SUBCASE("adam first step has magnitude close to lr") {
    OptimizerState st(OptimizerConfig::adam());
    ParamVector p{0.0};
    optimizer_step(st, p, ParamVector{0.37}, 0.01);
    CHECK(std::abs(p[0] + 0.01) < 1e-6);  // update = -lr * g/|g| up to eps
  }
  SUBCASE("rmsprop matches the scalar recurrence") {
    OptimizerState st(OptimizerConfig::rmsprop(0.99, 1e-8));
    ParamVector p{1.0};
    const double g = 0.5, lr = 0.05;
    double v = 0.0, ref = 1.0;
    for (int t = 0; t < 20; ++t) {
      optimizer_step(st, p, ParamVector{g}, lr);
      v = 0.99 * v + 0.01 * g * g;
      ref -= lr * g / (std::sqrt(v) + 1e-8);
      CHECK(std::abs(p[0] - ref) < 1e-12);
    }
    CHECK(st.step_count == 20);
  }
}

TEST_CASE("spec json and parameter stream round trips") {
  MlpSpec spec;
  spec.layers.push_back(LayerSpec::dense(106, 60));
  spec.layers.push_back(LayerSpec::leaky_relu(0.2));
  spec.layers.push_back(LayerSpec::dense(60, 15));
  spec.layers.push_back(LayerSpec::leaky_relu(0.2));
  MlpSpec back = MlpSpec::from_json(spec.to_json());
  CHECK(back.layers.size() == spec.layers.size());
  CHECK(back.param_count() == spec.param_count());
  CHECK(back.input_dim() == 106);
  CHECK(back.output_dim() == 15);

  Rng rng(21);
  ParamVector p = init_params(spec, rng);
  std::ostringstream out;
  write_params(out, p);
  std::istringstream in(out.str());
  CHECK(read_params(in) == p);
}

TEST_CASE("spec validation rejects malformed networks") {
  MlpSpec bad;
  bad.layers.push_back(LayerSpec::dense(3, 4));
  bad.layers.push_back(LayerSpec::dense(5, 2));
  CHECK_THROWS(bad.validate());

  MlpSpec bad_slope;
  bad_slope.layers.push_back(LayerSpec::dense(3, 3));
  bad_slope.layers.push_back(LayerSpec::leaky_relu(1.5));
  CHECK_THROWS(bad_slope.validate());

  MlpSpec bad_link;
  bad_link.layers.push_back(LayerSpec::dense(3, 3));
  bad_link.layers.push_back(LayerSpec::dense(3, 2));
  bad_link.residual_links.push_back({0, 1});
  CHECK_THROWS(bad_link.validate());
}
