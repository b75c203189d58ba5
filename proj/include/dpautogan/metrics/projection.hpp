#pragma once

#include <cstdint>
#include <vector>

#include "dpautogan/matrix.hpp"

namespace dpag::metrics {

struct PcaResult {
  Matrix projection;         // n x k, orthonormal columns
  double explained_variance = 0.0;  // fraction of total variance captured
  std::size_t components = 0;       // may be < k when rank is deficient
  bool rank_deficient = false;
};

// Top-k eigenvectors of the mean-centered covariance, sign-fixed so the
// largest-magnitude coordinate of each component is positive.
PcaResult pca_projection(const Matrix& data, std::size_t k = 2);

Matrix project(const Matrix& data, const Matrix& projection);

// Minimum over perfect matchings of the mean squared euclidean cost between
// two equally sized point sets, via the O(n^3) assignment algorithm.
double matching_cost(const Matrix& a, const Matrix& b);

struct WassersteinOptions {
  std::size_t exact_limit = 512;  // larger sets are subsampled
  int subsample_rounds = 4;
  std::uint64_t seed = 0;
};

// 1 - W2 / (sqrt(v) * diameter^2) where W2 is the exact mean matching cost
// on squared distances. Unequal sizes are reduced by seeded subsampling of
// the larger set; sets beyond exact_limit are averaged over seeded
// subsample rounds.
double wasserstein_score(const Matrix& real_proj, const Matrix& synth_proj,
                         double diameter, double explained_variance,
                         WassersteinOptions opts = {});

}  // namespace dpag::metrics
