#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dpautogan/predict/predictor.hpp"
#include "dpautogan/rng.hpp"

namespace dpag::predict {

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    s += p * p;
  }
  return 1.0 - s;
}

int majority(const std::vector<std::size_t>& counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                          counts.begin());  // ties to the lowest class
}

struct TreeBuilder {
  const Matrix& X;
  const std::vector<int>& y;
  int n_classes;
  const ForestOptions& opts;
  Rng& rng;
  std::vector<RandomForest::Node>* nodes;

  int build(std::vector<std::size_t>& rows, int depth) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t r : rows) counts[y[r]]++;

    const int node_id = static_cast<int>(nodes->size());
    nodes->push_back({});
    (*nodes)[node_id].label = majority(counts);

    const double impurity = gini(counts, rows.size());
    const bool depth_ok = opts.max_depth < 0 || depth < opts.max_depth;
    if (impurity == 0.0 || !depth_ok ||
        rows.size() < 2 * static_cast<std::size_t>(opts.min_leaf))
      return node_id;

    // Candidate features: sqrt(p) by default, sampled without replacement.
    const std::size_t p = X.cols();
    std::size_t n_try;
    if (opts.feature_subsample > 0)
      n_try = std::min<std::size_t>(opts.feature_subsample, p);
    else if (opts.feature_subsample == 0)
      n_try = p;
    else
      n_try = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::floor(std::sqrt(
                 static_cast<double>(p)))));
    std::vector<std::size_t> feats(p);
    std::iota(feats.begin(), feats.end(), 0);
    for (std::size_t i = 0; i < n_try; ++i)
      std::swap(feats[i], feats[i + rng.below(p - i)]);
    feats.resize(n_try);

    double best_score = impurity * static_cast<double>(rows.size());
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> vals(rows.size());
    for (std::size_t f : feats) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        vals[i] = {X(rows[i], f), y[rows[i]]};
      std::sort(vals.begin(), vals.end());
      std::vector<std::size_t> left(n_classes, 0), right = counts;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        left[vals[i].second]++;
        right[vals[i].second]--;
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t nl = i + 1, nr = vals.size() - nl;
        if (nl < static_cast<std::size_t>(opts.min_leaf) ||
            nr < static_cast<std::size_t>(opts.min_leaf))
          continue;
        const double score = gini(left, nl) * static_cast<double>(nl) +
                             gini(right, nr) * static_cast<double>(nr);
        if (score < best_score - 1e-12) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows)
      (X(r, best_feature) <= best_threshold ? lrows : rrows).push_back(r);
    if (lrows.empty() || rrows.empty()) return node_id;

    rows.clear();
    rows.shrink_to_fit();
    const int left_id = build(lrows, depth + 1);
    const int right_id = build(rrows, depth + 1);
    (*nodes)[node_id].feature = best_feature;
    (*nodes)[node_id].threshold = best_threshold;
    (*nodes)[node_id].left = left_id;
    (*nodes)[node_id].right = right_id;
    return node_id;
  }
};

}  // namespace

void RandomForest::fit(const Matrix& X, const std::vector<int>& y,
                       int n_classes, ForestOptions opts) {
  if (X.rows() == 0) throw std::invalid_argument("empty training set");
  if (X.rows() != y.size())
    throw std::invalid_argument("feature/label row count mismatch");
  if (n_classes < 2) throw std::invalid_argument("need at least two classes");
  n_classes_ = n_classes;
  trees_.clear();
  degenerate_ =
      std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });

  const std::size_t n = X.rows();
  for (int t = 0; t < opts.n_trees; ++t) {
    Rng rng(opts.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows(n);
    if (opts.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) rows[i] = rng.below(n);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    Tree tree;
    TreeBuilder builder{X, y, n_classes, opts, rng, &tree.nodes};
    builder.build(rows, 0);
    trees_.push_back(std::move(tree));
  }
}

int RandomForest::predict_one(const Tree& t, const double* row) const {
  int id = 0;
  while (t.nodes[id].feature >= 0)
    id = row[t.nodes[id].feature] <= t.nodes[id].threshold ? t.nodes[id].left
                                                           : t.nodes[id].right;
  return t.nodes[id].label;
}

std::vector<int> RandomForest::tree_votes(const double* row) const {
  std::vector<int> votes;
  votes.reserve(trees_.size());
  for (const Tree& t : trees_) votes.push_back(predict_one(t, row));
  return votes;
}

Matrix RandomForest::predict_proba(const Matrix& X) const {
  if (trees_.empty()) throw std::logic_error("forest is not fitted");
  Matrix out(X.rows(), n_classes_);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (const Tree& t : trees_) out(i, predict_one(t, X.row(i))) += 1.0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(n_classes_); ++c)
      out(i, c) /= static_cast<double>(trees_.size());
  }
  return out;
}

std::vector<int> RandomForest::predict(const Matrix& X) const {
  Matrix proba = predict_proba(X);
  std::vector<int> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < n_classes_; ++c)
      if (proba(i, c) > proba(i, best)) best = c;
    out[i] = best;
  }
  return out;
}

}  // namespace dpag::predict
