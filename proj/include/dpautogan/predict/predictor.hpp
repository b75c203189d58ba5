#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dpautogan/matrix.hpp"

namespace dpag::predict {

// Gradient-descent logistic regression with step halving; the training loss
// decreases monotonically across iterations.
struct LogisticOptions {
  double tol = 1e-6;
  int max_iters = 10000;
  double lr = 1.0;
};

class Logistic {
 public:
  // y entries must be 0 or 1. A single-class target yields a degenerate
  // constant predictor rather than an error.
  void fit(const Matrix& X, const std::vector<int>& y,
           LogisticOptions opts = {});
  // P(class 1) per row.
  std::vector<double> predict_proba(const Matrix& X) const;
  bool degenerate() const { return degenerate_; }

 private:
  std::vector<double> w_;
  double b_ = 0.0;
  bool degenerate_ = false;
  int constant_class_ = 0;
};

class MultinomialLogistic {
 public:
  void fit(const Matrix& X, const std::vector<int>& y, int n_classes,
           LogisticOptions opts = {});
  // Row-stochastic class probabilities.
  Matrix predict_proba(const Matrix& X) const;
  bool degenerate() const { return degenerate_; }
  int n_classes() const { return n_classes_; }

 private:
  Matrix w_;  // n_classes x p
  std::vector<double> b_;
  int n_classes_ = 0;
  bool degenerate_ = false;
  int constant_class_ = 0;
};

// Least squares with an optional l1 penalty, solved by coordinate descent on
// standardized features; the intercept is never penalized.
struct LinearOptions {
  double l1 = 0.0;
  double tol = 1e-8;
  int max_iters = 10000;
};

class LinearRegression {
 public:
  void fit(const Matrix& X, const std::vector<double>& y,
           LinearOptions opts = {});
  std::vector<double> predict(const Matrix& X) const;
  const std::vector<double>& coefficients() const { return w_; }
  double intercept() const { return b_; }

 private:
  std::vector<double> w_;
  double b_ = 0.0;
};

struct ForestOptions {
  int n_trees = 100;
  int max_depth = -1;       // -1: unlimited
  int min_leaf = 1;
  int feature_subsample = -1;  // -1: floor(sqrt(p)), 0: all features
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

class RandomForest {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
  };
  struct Tree {
    std::vector<Node> nodes;
  };

  void fit(const Matrix& X, const std::vector<int>& y, int n_classes,
           ForestOptions opts = {});
  std::vector<int> predict(const Matrix& X) const;
  // Vote share per class; rows sum to 1.
  Matrix predict_proba(const Matrix& X) const;
  // Per-tree class prediction for one example, in tree order.
  std::vector<int> tree_votes(const double* row) const;
  bool degenerate() const { return degenerate_; }
  int n_classes() const { return n_classes_; }
  std::size_t tree_count() const { return trees_.size(); }

 private:
  int predict_one(const Tree& t, const double* row) const;

  std::vector<Tree> trees_;
  int n_classes_ = 0;
  bool degenerate_ = false;
};

}  // namespace dpag::predict
