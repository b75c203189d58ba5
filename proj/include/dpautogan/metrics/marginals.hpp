#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpautogan/data/dataset.hpp"
#include "dpautogan/metrics/scores.hpp"
#include "dpautogan/predict/predictor.hpp"

namespace dpag::metrics {

// Total-variation-style score between the binned k-way joint marginals,
// in [0, 2]: sum over bins of |mass_real - mass_synth|, counting bins
// present in only one dataset at their full mass. Continuous features are
// binned against the real data's observed min/max; synthetic values
// falling outside clamp to the edge bins. Categorical features bin by
// category index.
double kway_marginal_tv(const data::RawDataset& real,
                        const data::RawDataset& synth,
                        std::span<const std::size_t> features, int bins = 100);

// Average over `repeats` uniformly sampled k-subsets of the schema columns.
double kway_marginal_tv_random(const data::RawDataset& real,
                               const data::RawDataset& synth, int k,
                               int repeats, std::uint64_t seed,
                               int bins = 100);

struct HistogramTable {
  std::string feature;
  std::vector<std::string> labels;  // categories or bin ranges
  std::vector<double> real_freq;    // sums to 1
  std::vector<double> synth_freq;
};

// Categorical columns produce per-category frequencies; continuous columns
// use equal-width bins over the schema bounds with the top edge landing in
// the last bin.
HistogramTable histogram_1way(const data::RawDataset& real,
                              const data::RawDataset& synth,
                              std::size_t feature, int bins = 20);

struct ProbabilityPair {
  std::string feature;
  double p_real = 0.0;
  double p_synth = 0.0;
};

// Proportion of ones per binary feature in real vs synthetic data.
std::vector<ProbabilityPair> dimension_wise_probability(
    const data::RawDataset& real, const data::RawDataset& synth);

struct PredictionPolicy {
  enum class Classifier { Forest, Logistic };
  Classifier classifier = Classifier::Forest;
  predict::ForestOptions forest;
  predict::LogisticOptions logistic;
  predict::LinearOptions regression{1e-3, 1e-8, 10000};  // lasso default
  std::uint64_t seed = 0;
};

struct PredictionScore {
  std::string feature;
  bool is_regression = false;
  // Classification: F1 (micro for multiclass); regression: R^2. Absent when
  // undefined (constant regression target).
  std::optional<double> score_real;
  std::optional<double> score_synth;
  std::optional<double> auroc_real;   // binary features only
  std::optional<double> auroc_synth;
  bool synth_single_class = false;  // synthetic column had no diversity
};

// Train-on-real and train-on-synthetic predictors for every feature,
// both evaluated on the real test set.
std::vector<PredictionScore> dimension_wise_prediction(
    const data::RawDataset& real_train, const data::RawDataset& synth,
    const data::RawDataset& real_test, const PredictionPolicy& policy = {});

struct LabelPredictionResult {
  double accuracy = 0.0;
  double f1 = 0.0;
  bool synth_single_class = false;
};

// Random forest trained on the synthetic rows to predict `label_column`,
// evaluated on the real test set.
LabelPredictionResult label_prediction_accuracy(
    const data::RawDataset& synth, const data::RawDataset& real_test,
    std::size_t label_column, predict::ForestOptions forest = {});

}  // namespace dpag::metrics
