#include "dpautogan/metrics/scores.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace dpag::metrics {

namespace {

double f1_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;  // 0/0 -> 0
}

}  // namespace

ClassificationScores binary_scores(const std::vector<int>& y_true,
                                   const std::vector<double>& prob1) {
  if (y_true.size() != prob1.size() || y_true.empty())
    throw std::invalid_argument("score length mismatch");
  ClassificationScores s;

  std::int64_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int pred = prob1[i] >= 0.5 ? 1 : 0;
    if (pred == y_true[i]) ++correct;
    if (pred == 1 && y_true[i] == 1) ++tp;
    if (pred == 1 && y_true[i] == 0) ++fp;
    if (pred == 0 && y_true[i] == 1) ++fn;
  }
  s.accuracy = static_cast<double>(correct) / y_true.size();
  s.f1 = f1_from_counts(tp, fp, fn);

  const std::int64_t n_pos = std::count(y_true.begin(), y_true.end(), 1);
  const std::int64_t n_neg = static_cast<std::int64_t>(y_true.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) return s;  // auroc undefined

  // Sort scores; accumulate, per tie group, how many negatives each
  // positive strictly beats plus half of the ties. Integer counts keep
  // the result bit-identical to the O(n^2) pairwise definition.
  std::vector<std::pair<double, int>> ranked(y_true.size());
  for (std::size_t i = 0; i < y_true.size(); ++i)
    ranked[i] = {prob1[i], y_true[i]};
  std::sort(ranked.begin(), ranked.end());

  std::int64_t neg_below = 0;
  std::int64_t greater = 0, ties = 0;
  std::size_t i = 0;
  while (i < ranked.size()) {
    std::size_t j = i;
    std::int64_t group_pos = 0, group_neg = 0;
    while (j < ranked.size() && ranked[j].first == ranked[i].first) {
      ranked[j].second ? ++group_pos : ++group_neg;
      ++j;
    }
    greater += group_pos * neg_below;
    ties += group_pos * group_neg;
    neg_below += group_neg;
    i = j;
  }
  s.auroc = (static_cast<double>(greater) + 0.5 * static_cast<double>(ties)) /
            (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  return s;
}

ClassificationScores multiclass_scores(const std::vector<int>& y_true,
                                       const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty())
    throw std::invalid_argument("score length mismatch");
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++correct;
  ClassificationScores s;
  s.accuracy = static_cast<double>(correct) / y_true.size();
  // With one predicted label per row, micro TP = correct and micro
  // FP = FN = misclassified, so micro-F1 reduces to accuracy.
  s.f1 = s.accuracy;
  return s;
}

std::optional<double> r2_score(const std::vector<double>& y_true,
                               const std::vector<double>& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty())
    throw std::invalid_argument("score length mismatch");
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= static_cast<double>(y_true.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
  }
  if (ss_tot == 0.0) return std::nullopt;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace dpag::metrics
