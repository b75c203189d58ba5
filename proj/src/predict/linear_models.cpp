#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpautogan/predict/predictor.hpp"

namespace dpag::predict {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_xy(const Matrix& X, std::size_t ylen) {
  if (X.rows() == 0) throw std::invalid_argument("empty training set");
  if (X.rows() != ylen)
    throw std::invalid_argument("feature/label row count mismatch");
}

}  // namespace

void Logistic::fit(const Matrix& X, const std::vector<int>& y,
                   LogisticOptions opts) {
  check_xy(X, y.size());
  const std::size_t n = X.rows(), p = X.cols();
  w_.assign(p, 0.0);
  b_ = 0.0;
  degenerate_ = false;

  const int first = y.front();
  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == first; })) {
    degenerate_ = true;
    constant_class_ = first;
    return;
  }

  auto loss_at = [&](const std::vector<double>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < p; ++j) z += w[j] * X(i, j);
      // log(1 + e^{-z}) for y=1, log(1 + e^{z}) for y=0, stably.
      const double m = y[i] ? -z : z;
      loss += m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
    return loss / static_cast<double>(n);
  };

  double loss = loss_at(w_, b_);
  double step = opts.lr;
  std::vector<double> gw(p), trial_w(p);
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b_;
      for (std::size_t j = 0; j < p; ++j) z += w_[j] * X(i, j);
      const double r = sigmoid(z) - y[i];
      for (std::size_t j = 0; j < p; ++j) gw[j] += r * X(i, j);
      gb += r;
    }
    for (double& g : gw) g /= static_cast<double>(n);
    gb /= static_cast<double>(n);

    double next = loss;
    double trial_b = b_;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t j = 0; j < p; ++j) trial_w[j] = w_[j] - step * gw[j];
      trial_b = b_ - step * gb;
      next = loss_at(trial_w, trial_b);
      if (next <= loss) break;
      step *= 0.5;
    }
    if (next > loss) break;  // no descent direction at any step size
    w_ = trial_w;
    b_ = trial_b;
    const double improvement = loss - next;
    loss = next;
    step *= 1.3;  // regrow so halvings never freeze the step scale
    if (improvement < opts.tol) break;
  }
}

std::vector<double> Logistic::predict_proba(const Matrix& X) const {
  std::vector<double> out(X.rows());
  if (degenerate_) {
    std::fill(out.begin(), out.end(), constant_class_ ? 1.0 : 0.0);
    return out;
  }
  if (X.cols() != w_.size())
    throw std::invalid_argument("feature width mismatch");
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double z = b_;
    for (std::size_t j = 0; j < X.cols(); ++j) z += w_[j] * X(i, j);
    out[i] = sigmoid(z);
  }
  return out;
}

void MultinomialLogistic::fit(const Matrix& X, const std::vector<int>& y,
                              int n_classes, LogisticOptions opts) {
  check_xy(X, y.size());
  if (n_classes < 2) throw std::invalid_argument("need at least two classes");
  const std::size_t n = X.rows(), p = X.cols();
  const std::size_t k = static_cast<std::size_t>(n_classes);
  n_classes_ = n_classes;
  w_ = Matrix(k, p);
  b_.assign(k, 0.0);
  degenerate_ = false;

  const int first = y.front();
  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == first; })) {
    degenerate_ = true;
    constant_class_ = first;
    return;
  }

  auto probs_of = [&](const Matrix& w, const std::vector<double>& b,
                      std::size_t i, std::vector<double>& out) {
    double zmax = -1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double z = b[c];
      for (std::size_t j = 0; j < p; ++j) z += w(c, j) * X(i, j);
      out[c] = z;
      zmax = std::max(zmax, z);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      out[c] = std::exp(out[c] - zmax);
      sum += out[c];
    }
    for (std::size_t c = 0; c < k; ++c) out[c] /= sum;
  };
  auto loss_at = [&](const Matrix& w, const std::vector<double>& b) {
    std::vector<double> pr(k);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      probs_of(w, b, i, pr);
      loss -= std::log(std::max(pr[y[i]], 1e-300));
    }
    return loss / static_cast<double>(n);
  };

  double loss = loss_at(w_, b_);
  double step = opts.lr;
  Matrix gw(k, p), trial_w(k, p);
  std::vector<double> gb(k), trial_b(k), pr(k);
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    std::fill(gw.data().begin(), gw.data().end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      probs_of(w_, b_, i, pr);
      for (std::size_t c = 0; c < k; ++c) {
        const double r = pr[c] - (y[i] == static_cast<int>(c) ? 1.0 : 0.0);
        for (std::size_t j = 0; j < p; ++j) gw(c, j) += r * X(i, j);
        gb[c] += r;
      }
    }
    for (double& g : gw.data()) g /= static_cast<double>(n);
    for (double& g : gb) g /= static_cast<double>(n);

    double next = loss;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < gw.data().size(); ++i)
        trial_w.data()[i] = w_.data()[i] - step * gw.data()[i];
      for (std::size_t c = 0; c < k; ++c) trial_b[c] = b_[c] - step * gb[c];
      next = loss_at(trial_w, trial_b);
      if (next <= loss) break;
      step *= 0.5;
    }
    if (next > loss) break;
    w_ = trial_w;
    b_ = trial_b;
    const double improvement = loss - next;
    loss = next;
    step *= 1.3;
    if (improvement < opts.tol) break;
  }
}

Matrix MultinomialLogistic::predict_proba(const Matrix& X) const {
  const std::size_t k = static_cast<std::size_t>(n_classes_);
  Matrix out(X.rows(), k);
  if (degenerate_) {
    for (std::size_t i = 0; i < X.rows(); ++i) out(i, constant_class_) = 1.0;
    return out;
  }
  if (X.cols() != w_.cols())
    throw std::invalid_argument("feature width mismatch");
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double zmax = -1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double z = b_[c];
      for (std::size_t j = 0; j < X.cols(); ++j) z += w_(c, j) * X(i, j);
      out(i, c) = z;
      zmax = std::max(zmax, z);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      out(i, c) = std::exp(out(i, c) - zmax);
      sum += out(i, c);
    }
    for (std::size_t c = 0; c < k; ++c) out(i, c) /= sum;
  }
  return out;
}

void LinearRegression::fit(const Matrix& X, const std::vector<double>& y,
                           LinearOptions opts) {
  check_xy(X, y.size());
  const std::size_t n = X.rows(), p = X.cols();

  // Standardize features and center the target; constant columns are left
  // out of the fit entirely.
  std::vector<double> mean(p, 0.0), scale(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += X(i, j);
    mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = X(i, j) - mean[j];
      scale[j] += d * d;
    }
    scale[j] = std::sqrt(scale[j] / static_cast<double>(n));
  }
  double ymean = 0.0;
  for (double v : y) ymean += v;
  ymean /= static_cast<double>(n);

  Matrix Z(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i)
      Z(i, j) = scale[j] > 0 ? (X(i, j) - mean[j]) / scale[j] : 0.0;

  std::vector<double> beta(p, 0.0);
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - ymean;

  // Coordinate descent with soft thresholding; columns of Z have unit
  // second moment, so each coordinate update is a closed form.
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    double max_delta = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (scale[j] == 0.0) continue;
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += Z(i, j) * resid[i];
      rho = rho / static_cast<double>(n) + beta[j];
      const double nb =
          std::copysign(std::max(std::abs(rho) - opts.l1, 0.0), rho);
      const double delta = nb - beta[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * Z(i, j);
        beta[j] = nb;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < opts.tol) break;
  }

  w_.assign(p, 0.0);
  b_ = ymean;
  for (std::size_t j = 0; j < p; ++j) {
    if (scale[j] > 0.0) {
      w_[j] = beta[j] / scale[j];
      b_ -= w_[j] * mean[j];
    }
  }
}

std::vector<double> LinearRegression::predict(const Matrix& X) const {
  if (X.cols() != w_.size())
    throw std::invalid_argument("feature width mismatch");
  std::vector<double> out(X.rows(), b_);
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) out[i] += w_[j] * X(i, j);
  return out;
}

}  // namespace dpag::predict
