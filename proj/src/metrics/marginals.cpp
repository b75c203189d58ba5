#include "dpautogan/metrics/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dpautogan/rng.hpp"

namespace dpag::metrics {

using data::ColumnKind;
using data::RawDataset;

namespace {

// Real-data bounds per continuous feature, shared by both binnings.
struct BinRule {
  double min = 0.0;
  double max = 0.0;
};

int bin_of(const RawDataset& ds, std::size_t row, std::size_t col,
           const BinRule& rule, int bins) {
  const data::ColumnSpec& spec = ds.schema.columns[col];
  if (spec.kind != ColumnKind::Continuous)
    return ds.cat[col][row];
  if (rule.max <= rule.min) return 0;  // degenerate single-bin feature
  const double v = ds.num[col][row];
  const int b = static_cast<int>(
      std::floor((v - rule.min) * bins / (rule.max - rule.min)));
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

double kway_marginal_tv(const RawDataset& real, const RawDataset& synth,
                        std::span<const std::size_t> features, int bins) {
  if (features.empty()) throw std::invalid_argument("need at least 1 feature");
  if (real.rows == 0 || synth.rows == 0)
    throw std::invalid_argument("empty dataset");
  if (bins < 1) throw std::invalid_argument("bins must be positive");

  std::vector<BinRule> rules(features.size());
  for (std::size_t f = 0; f < features.size(); ++f) {
    const std::size_t col = features[f];
    if (real.schema.columns.at(col).kind == ColumnKind::Continuous) {
      const auto& v = real.num[col];
      rules[f].min = *std::min_element(v.begin(), v.end());
      rules[f].max = *std::max_element(v.begin(), v.end());
    }
  }

  // Lexicographic bin-tuple order keeps the summation order canonical.
  std::map<std::vector<int>, std::pair<std::size_t, std::size_t>> counts;
  std::vector<int> key(features.size());
  for (std::size_t r = 0; r < real.rows; ++r) {
    for (std::size_t f = 0; f < features.size(); ++f)
      key[f] = bin_of(real, r, features[f], rules[f], bins);
    counts[key].first++;
  }
  for (std::size_t r = 0; r < synth.rows; ++r) {
    for (std::size_t f = 0; f < features.size(); ++f)
      key[f] = bin_of(synth, r, features[f], rules[f], bins);
    counts[key].second++;
  }

  double score = 0.0;
  for (const auto& [k, c] : counts) {
    const double mr = static_cast<double>(c.first) / real.rows;
    const double ms = static_cast<double>(c.second) / synth.rows;
    score += std::abs(mr - ms);
  }
  return score;
}

double kway_marginal_tv_random(const RawDataset& real, const RawDataset& synth,
                               int k, int repeats, std::uint64_t seed,
                               int bins) {
  const std::size_t n_cols = real.schema.columns.size();
  if (k < 1 || static_cast<std::size_t>(k) > n_cols)
    throw std::invalid_argument("subset size out of range");
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  Rng rng(seed);
  std::vector<std::size_t> cols(n_cols);
  double sum = 0.0;
  for (int rep = 0; rep < repeats; ++rep) {
    std::iota(cols.begin(), cols.end(), 0);
    for (int i = 0; i < k; ++i)
      std::swap(cols[i], cols[i + rng.below(n_cols - i)]);
    sum += kway_marginal_tv(real, synth,
                            std::span(cols.data(), static_cast<std::size_t>(k)),
                            bins);
  }
  return sum / repeats;
}

HistogramTable histogram_1way(const RawDataset& real, const RawDataset& synth,
                              std::size_t feature, int bins) {
  const data::ColumnSpec& col = real.schema.columns.at(feature);
  HistogramTable t;
  t.feature = col.name;

  if (col.kind == ColumnKind::Continuous) {
    t.labels.resize(bins);
    const double width = (col.max - col.min) / bins;
    for (int b = 0; b < bins; ++b) {
      std::ostringstream lab;
      lab << "[" << col.min + b * width << "," << col.min + (b + 1) * width
          << (b + 1 == bins ? "]" : ")");
      t.labels[b] = lab.str();
    }
    auto fill = [&](const RawDataset& ds, std::vector<double>& freq) {
      freq.assign(bins, 0.0);
      for (double v : ds.num[feature]) {
        int b = static_cast<int>(
            std::floor((v - col.min) * bins / (col.max - col.min)));
        freq[std::clamp(b, 0, bins - 1)] += 1.0;  // top edge in the last bin
      }
      for (double& f : freq) f /= static_cast<double>(ds.rows);
    };
    fill(real, t.real_freq);
    fill(synth, t.synth_freq);
  } else {
    t.labels = col.categories;
    auto fill = [&](const RawDataset& ds, std::vector<double>& freq) {
      freq.assign(col.categories.size(), 0.0);
      for (std::int32_t c : ds.cat[feature]) freq[c] += 1.0;
      for (double& f : freq) f /= static_cast<double>(ds.rows);
    };
    fill(real, t.real_freq);
    fill(synth, t.synth_freq);
  }
  return t;
}

std::vector<ProbabilityPair> dimension_wise_probability(
    const RawDataset& real, const RawDataset& synth) {
  std::vector<ProbabilityPair> out;
  for (std::size_t c = 0; c < real.schema.columns.size(); ++c) {
    const data::ColumnSpec& col = real.schema.columns[c];
    if (!col.is_binary()) continue;
    ProbabilityPair p;
    p.feature = col.name;
    for (std::int32_t v : real.cat[c]) p.p_real += v == 1 ? 1.0 : 0.0;
    for (std::int32_t v : synth.cat[c]) p.p_synth += v == 1 ? 1.0 : 0.0;
    p.p_real /= static_cast<double>(real.rows);
    p.p_synth /= static_cast<double>(synth.rows);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Encoded features with one column block removed.
Matrix drop_block(const data::EncodedMatrix& enc, std::size_t begin,
                  std::size_t end) {
  const std::size_t n = enc.values.cols();
  Matrix out(enc.values.rows(), n - (end - begin));
  for (std::size_t i = 0; i < enc.values.rows(); ++i) {
    double* dst = out.row(i);
    const double* src = enc.values.row(i);
    std::copy(src, src + begin, dst);
    std::copy(src + end, src + n, dst + begin);
  }
  return out;
}

std::vector<int> int_labels(const RawDataset& ds, std::size_t col) {
  return std::vector<int>(ds.cat[col].begin(), ds.cat[col].end());
}

struct FittedScores {
  std::optional<double> score;
  std::optional<double> auroc;
  bool single_class = false;
};

FittedScores classification_branch(const Matrix& Xtrain,
                                   const std::vector<int>& ytrain,
                                   const Matrix& Xtest,
                                   const std::vector<int>& ytest,
                                   int n_classes, bool binary,
                                   const PredictionPolicy& policy) {
  FittedScores out;
  out.single_class =
      std::all_of(ytrain.begin(), ytrain.end(),
                  [&](int v) { return v == ytrain.front(); });
  if (binary) {
    std::vector<double> prob1;
    bool degenerate = out.single_class;
    if (policy.classifier == PredictionPolicy::Classifier::Forest) {
      predict::RandomForest forest;
      predict::ForestOptions fo = policy.forest;
      fo.seed = policy.seed;
      forest.fit(Xtrain, ytrain, 2, fo);
      Matrix proba = forest.predict_proba(Xtest);
      prob1.resize(Xtest.rows());
      for (std::size_t i = 0; i < Xtest.rows(); ++i) prob1[i] = proba(i, 1);
      degenerate = degenerate || forest.degenerate();
    } else {
      predict::Logistic lr;
      lr.fit(Xtrain, ytrain, policy.logistic);
      prob1 = lr.predict_proba(Xtest);
      degenerate = degenerate || lr.degenerate();
    }
    ClassificationScores s = binary_scores(ytest, prob1);
    out.score = s.f1;
    // A constant classifier yields a one-point ROC curve.
    out.auroc = degenerate ? std::nullopt : s.auroc;
  } else {
    std::vector<int> pred;
    if (policy.classifier == PredictionPolicy::Classifier::Forest) {
      predict::RandomForest forest;
      predict::ForestOptions fo = policy.forest;
      fo.seed = policy.seed;
      forest.fit(Xtrain, ytrain, n_classes, fo);
      pred = forest.predict(Xtest);
    } else {
      predict::MultinomialLogistic lr;
      lr.fit(Xtrain, ytrain, n_classes, policy.logistic);
      Matrix proba = lr.predict_proba(Xtest);
      pred.resize(Xtest.rows());
      for (std::size_t i = 0; i < Xtest.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
          if (proba(i, c) > proba(i, best)) best = c;
        pred[i] = best;
      }
    }
    out.score = multiclass_scores(ytest, pred).f1;
  }
  return out;
}

}  // namespace

std::vector<PredictionScore> dimension_wise_prediction(
    const RawDataset& real_train, const RawDataset& synth,
    const RawDataset& real_test, const PredictionPolicy& policy) {
  const data::Schema& schema = real_train.schema;
  const data::EncodedMatrix enc_r = preprocess(real_train);
  const data::EncodedMatrix enc_s = preprocess(synth);
  const data::EncodedMatrix enc_t = preprocess(real_test);
  const std::vector<std::size_t> off = schema.offsets();

  std::vector<PredictionScore> scores;
  for (std::size_t k = 0; k < schema.columns.size(); ++k) {
    const data::ColumnSpec& col = schema.columns[k];
    PredictionScore row;
    row.feature = col.name;

    const Matrix Xr = drop_block(enc_r, off[k], off[k + 1]);
    const Matrix Xs = drop_block(enc_s, off[k], off[k + 1]);
    const Matrix Xt = drop_block(enc_t, off[k], off[k + 1]);

    if (col.kind == ColumnKind::Continuous) {
      row.is_regression = true;
      const std::vector<double>&yt = real_test.num[k];
      predict::LinearRegression on_real, on_synth;
      on_real.fit(Xr, real_train.num[k], policy.regression);
      on_synth.fit(Xs, synth.num[k], policy.regression);
      row.score_real = r2_score(yt, on_real.predict(Xt));
      row.score_synth = r2_score(yt, on_synth.predict(Xt));
      const auto& sv = synth.num[k];
      row.synth_single_class =
          std::all_of(sv.begin(), sv.end(),
                      [&](double v) { return v == sv.front(); });
    } else {
      const bool binary = col.is_binary();
      const int n_classes = static_cast<int>(col.categories.size());
      const std::vector<int> yr = int_labels(real_train, k);
      const std::vector<int> ys = int_labels(synth, k);
      const std::vector<int> yt = int_labels(real_test, k);

      FittedScores real_fit = classification_branch(Xr, yr, Xt, yt, n_classes,
                                                    binary, policy);
      FittedScores synth_fit = classification_branch(Xs, ys, Xt, yt, n_classes,
                                                     binary, policy);
      row.score_real = real_fit.score;
      row.score_synth = synth_fit.score;
      row.synth_single_class = synth_fit.single_class;
      if (binary) {
        const bool test_single =
            std::all_of(yt.begin(), yt.end(),
                        [&](int v) { return v == yt.front(); });
        row.auroc_real = test_single ? std::nullopt : real_fit.auroc;
        row.auroc_synth = test_single ? std::nullopt : synth_fit.auroc;
      }
    }
    scores.push_back(std::move(row));
  }
  return scores;
}

LabelPredictionResult label_prediction_accuracy(const RawDataset& synth,
                                                const RawDataset& real_test,
                                                std::size_t label_column,
                                                predict::ForestOptions forest) {
  const data::ColumnSpec& col = synth.schema.columns.at(label_column);
  if (col.kind == ColumnKind::Continuous)
    throw std::invalid_argument("label column must be categorical");

  const data::EncodedMatrix enc_s = preprocess(synth);
  const data::EncodedMatrix enc_t = preprocess(real_test);
  const std::vector<std::size_t> off = synth.schema.offsets();
  const Matrix Xs = drop_block(enc_s, off[label_column], off[label_column + 1]);
  const Matrix Xt = drop_block(enc_t, off[label_column], off[label_column + 1]);

  const std::vector<int> ys = int_labels(synth, label_column);
  const std::vector<int> yt = int_labels(real_test, label_column);

  predict::RandomForest model;
  model.fit(Xs, ys, static_cast<int>(col.categories.size()), forest);

  LabelPredictionResult out;
  out.synth_single_class = model.degenerate();
  if (col.is_binary()) {
    Matrix proba = model.predict_proba(Xt);
    std::vector<double> prob1(Xt.rows());
    for (std::size_t i = 0; i < Xt.rows(); ++i) prob1[i] = proba(i, 1);
    ClassificationScores s = binary_scores(yt, prob1);
    out.accuracy = s.accuracy;
    out.f1 = s.f1;
  } else {
    ClassificationScores s = multiclass_scores(yt, model.predict(Xt));
    out.accuracy = s.accuracy;
    out.f1 = s.f1;
  }
  return out;
}

}  // namespace dpag::metrics
