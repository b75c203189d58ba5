#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpautogan/data/dataset.hpp"
#include "dpautogan/metrics/distributions.hpp"
#include "dpautogan/metrics/marginals.hpp"
#include "dpautogan/metrics/projection.hpp"

namespace dpag::metrics {

struct ReportOptions {
  bool probability = true;
  bool prediction = true;
  bool histograms = true;
  bool kway = true;
  bool pca = true;
  bool diversity = true;
  std::string label_column;  // empty: skip the label prediction task

  int kway_k = 3;
  int kway_repeats = 100;
  int kway_bins = 100;
  int histogram_bins = 20;
  PredictionPolicy policy;
  std::uint64_t seed = 0;
};

struct DiversityRow {
  std::string feature;
  double p1 = 0.0;                // majority probability in the real data
  double jsd_score = 0.0;
  std::optional<double> mu;       // absent when p1 = 1
  std::optional<double> mu_kl;
  bool synth_single_class = false;
};

struct KwayEntry {
  int k = 0;
  int repeats = 0;
  double score = 0.0;
};

struct MetricReport {
  std::string real_train_id, real_test_id, synth_id;
  std::uint64_t seed = 0;

  std::vector<ProbabilityPair> probability;
  std::vector<PredictionScore> prediction;
  std::vector<DiversityRow> diversity;
  std::vector<KwayEntry> kway;
  std::vector<HistogramTable> histograms;

  std::optional<double> pca_wasserstein;
  double pca_explained_variance = 0.0;
  Matrix pca_real;   // projected real rows (2 columns)
  Matrix pca_synth;  // projected synthetic rows

  std::string label_feature;
  std::optional<LabelPredictionResult> label_task;

  std::string to_json() const;
};

MetricReport build_report(const data::RawDataset& real_train,
                          const data::RawDataset& real_test,
                          const data::RawDataset& synth,
                          const ReportOptions& options = {});

// One plot-ready CSV per figure type, written under out_dir.
void write_plot_tables(const MetricReport& report, const std::string& out_dir);

}  // namespace dpag::metrics
