#include "dpautogan/metrics/projection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dpautogan/rng.hpp"

namespace dpag::metrics {

PcaResult pca_projection(const Matrix& data, std::size_t k) {
  const std::size_t m = data.rows(), n = data.cols();
  if (m < 2) throw std::invalid_argument("pca needs at least two rows");
  if (k < 1) throw std::invalid_argument("need at least one component");

  Eigen::MatrixXd X(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) X(i, j) = data(i, j);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  X.rowwise() -= mean;
  const Eigen::MatrixXd cov =
      (X.transpose() * X) / static_cast<double>(m - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  double total = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    total += std::max(evals(i), 0.0);

  // Count usable components among the requested k.
  const double rank_tol = std::max(total, 1.0) * 1e-12;
  std::size_t usable = 0;
  for (std::size_t c = 0; c < std::min(k, n); ++c) {
    if (std::max(evals(static_cast<Eigen::Index>(n - 1 - c)), 0.0) > rank_tol)
      ++usable;
  }

  PcaResult res;
  res.rank_deficient = usable < k;
  res.components = std::max<std::size_t>(usable, 1);
  res.projection = Matrix(n, res.components);
  double captured = 0.0;
  for (std::size_t c = 0; c < res.components; ++c) {
    const Eigen::Index src = static_cast<Eigen::Index>(n - 1 - c);
    captured += std::max(evals(src), 0.0);
    // Canonical sign: largest-magnitude coordinate positive.
    Eigen::Index argmax = 0;
    evecs.col(src).cwiseAbs().maxCoeff(&argmax);
    const double sign = evecs(argmax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j)
      res.projection(j, c) = sign * evecs(static_cast<Eigen::Index>(j), src);
  }
  res.explained_variance = total > 0.0 ? captured / total : 0.0;
  return res;
}

Matrix project(const Matrix& data, const Matrix& projection) {
  if (data.cols() != projection.rows())
    throw std::invalid_argument("projection width mismatch");
  Matrix out(data.rows(), projection.cols());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t c = 0; c < projection.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < data.cols(); ++j)
        acc += data(i, j) * projection(j, c);
      out(i, c) = acc;
    }
  return out;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Shortest augmenting path assignment (Jonker-Volgenant style) on an n x n
// cost matrix; returns the column matched to each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Matrix sample_rows(const Matrix& m, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count; ++i)
    std::swap(idx[i], idx[i + rng.below(m.rows() - i)]);
  Matrix out(count, m.cols());
  for (std::size_t i = 0; i < count; ++i)
    std::copy(m.row(idx[i]), m.row(idx[i]) + m.cols(), out.row(i));
  return out;
}

}  // namespace

double matching_cost(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("point sets must have equal shape");
  const std::size_t n = a.rows();
  if (n == 0) throw std::invalid_argument("empty point sets");
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i][j] = sq_dist(a.row(i), b.row(j), a.cols());
  const std::vector<int> match = solve_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i][match[i]];
  return total / static_cast<double>(n);
}

double wasserstein_score(const Matrix& real_proj, const Matrix& synth_proj,
                         double diameter, double explained_variance,
                         WassersteinOptions opts) {
  if (!(diameter > 0.0)) throw std::invalid_argument("diameter must be > 0");
  if (!(explained_variance > 0.0))
    throw std::invalid_argument("explained variance must be > 0");
  if (real_proj.cols() != synth_proj.cols())
    throw std::invalid_argument("projection dimension mismatch");

  Rng rng(opts.seed);
  const std::size_t n = std::min(real_proj.rows(), synth_proj.rows());
  double cost;
  if (n <= opts.exact_limit) {
    const Matrix a = real_proj.rows() == n ? real_proj
                                           : sample_rows(real_proj, n, rng);
    const Matrix b = synth_proj.rows() == n ? synth_proj
                                            : sample_rows(synth_proj, n, rng);
    cost = matching_cost(a, b);
  } else {
    double sum = 0.0;
    for (int round = 0; round < opts.subsample_rounds; ++round) {
      const Matrix a = sample_rows(real_proj, opts.exact_limit, rng);
      const Matrix b = sample_rows(synth_proj, opts.exact_limit, rng);
      sum += matching_cost(a, b);
    }
    cost = sum / opts.subsample_rounds;
  }
  return 1.0 - cost / (std::sqrt(explained_variance) * diameter * diameter);
}

}  // namespace dpag::metrics
