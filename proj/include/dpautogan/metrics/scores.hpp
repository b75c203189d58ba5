#pragma once

#include <optional>
#include <vector>

namespace dpag::metrics {

struct ClassificationScores {
  double f1 = 0.0;        // binary: class-1 F1; multiclass: micro average
  double accuracy = 0.0;
  std::optional<double> auroc;  // binary only; absent when undefined
};

// Binary scores from P(class 1); labels threshold at 0.5. AUROC is the
// exact tie-aware rank statistic, equal to
//   P[s+ > s-] + P[s+ = s-]/2
// over positive/negative score pairs, and is absent when the truth has a
// single class.
ClassificationScores binary_scores(const std::vector<int>& y_true,
                                   const std::vector<double>& prob1);

// Micro-averaged F1 over single-label multiclass predictions (equal to
// plain accuracy) plus accuracy.
ClassificationScores multiclass_scores(const std::vector<int>& y_true,
                                       const std::vector<int>& y_pred);

// 1 - sum (y - yhat)^2 / sum (y - ybar)^2; absent when the truth is
// constant.
std::optional<double> r2_score(const std::vector<double>& y_true,
                               const std::vector<double>& y_pred);

}  // namespace dpag::metrics
