#include "dpautogan/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dpautogan/data/csv.hpp"
#include "json.hpp"

namespace dpag::metrics {

using data::ColumnKind;
using nlohmann::json;

namespace {

json opt_to_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out;
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string opt_fmt(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? fmt(*v) : "";
}

}  // namespace

MetricReport build_report(const data::RawDataset& real_train,
                          const data::RawDataset& real_test,
                          const data::RawDataset& synth,
                          const ReportOptions& options) {
  const data::Schema& schema = real_train.schema;
  MetricReport report;
  report.seed = options.seed;

  if (options.probability)
    report.probability = dimension_wise_probability(real_train, synth);

  if (options.prediction) {
    PredictionPolicy policy = options.policy;
    policy.seed = options.seed;
    report.prediction =
        dimension_wise_prediction(real_train, synth, real_test, policy);
  }

  if (options.diversity) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (schema.columns[c].kind == ColumnKind::Continuous) continue;
      DiversityRow row;
      row.feature = schema.columns[c].name;
      const DiscreteDist P = marginal_of(real_train, c);
      const DiscreteDist Q = marginal_of(synth, c);
      row.p1 = *std::max_element(P.probs.begin(), P.probs.end());
      row.jsd_score = jsd(P, Q);
      if (row.p1 < 1.0) {
        row.mu = auto_mu(P);
        row.mu_kl = mu_smoothed_kl(P, Q, row.mu);
      }
      row.synth_single_class =
          *std::max_element(Q.probs.begin(), Q.probs.end()) >= 1.0;
      report.diversity.push_back(std::move(row));
    }
  }

  if (options.kway) {
    for (int k : {1, 2, options.kway_k}) {
      if (k < 1 || static_cast<std::size_t>(k) > schema.columns.size())
        continue;
      if (std::any_of(report.kway.begin(), report.kway.end(),
                      [&](const KwayEntry& e) { return e.k == k; }))
        continue;
      KwayEntry e;
      e.k = k;
      e.repeats = options.kway_repeats;
      e.score = kway_marginal_tv_random(real_train, synth, k,
                                        options.kway_repeats, options.seed,
                                        options.kway_bins);
      report.kway.push_back(e);
    }
  }

  if (options.histograms) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c)
      report.histograms.push_back(
          histogram_1way(real_train, synth, c, options.histogram_bins));
  }

  if (options.pca) {
    const data::EncodedMatrix enc_r = preprocess(real_train);
    const data::EncodedMatrix enc_s = preprocess(synth);
    const PcaResult pca = pca_projection(enc_r.values, 2);
    report.pca_real = project(enc_r.values, pca.projection);
    report.pca_synth = project(enc_s.values, pca.projection);
    report.pca_explained_variance = pca.explained_variance;
    if (pca.explained_variance > 0.0) {
      const double diameter =
          std::sqrt(static_cast<double>(schema.encoded_width()));
      WassersteinOptions wopts;
      wopts.seed = options.seed;
      report.pca_wasserstein =
          wasserstein_score(report.pca_real, report.pca_synth, diameter,
                            pca.explained_variance, wopts);
    }
  }

  if (!options.label_column.empty()) {
    const std::size_t label = schema.column_index(options.label_column);
    report.label_feature = options.label_column;
    predict::ForestOptions forest;
    forest.seed = options.seed;
    report.label_task =
        label_prediction_accuracy(synth, real_test, label, forest);
  }
  return report;
}

std::string MetricReport::to_json() const {
  json j;
  j["provenance"] = {{"real_train", real_train_id},
                     {"real_test", real_test_id},
                     {"synthetic", synth_id},
                     {"seed", seed}};

  j["dimension_wise_probability"] = json::array();
  for (const ProbabilityPair& p : probability)
    j["dimension_wise_probability"].push_back(
        {{"feature", p.feature}, {"real", p.p_real}, {"synthetic", p.p_synth}});

  j["dimension_wise_prediction"] = json::array();
  for (const PredictionScore& s : prediction) {
    json e;
    e["feature"] = s.feature;
    e["kind"] = s.is_regression ? "regression" : "classification";
    e["score_real"] = opt_to_json(s.score_real);
    e["score_synthetic"] = opt_to_json(s.score_synth);
    if (!s.is_regression) {
      e["auroc_real"] = opt_to_json(s.auroc_real);
      e["auroc_synthetic"] = opt_to_json(s.auroc_synth);
    }
    e["synth_single_class"] = s.synth_single_class;
    j["dimension_wise_prediction"].push_back(e);
  }

  j["diversity"] = json::array();
  for (const DiversityRow& d : diversity)
    j["diversity"].push_back({{"feature", d.feature},
                              {"p1", d.p1},
                              {"jsd", d.jsd_score},
                              {"mu", opt_to_json(d.mu)},
                              {"mu_smoothed_kl", opt_to_json(d.mu_kl)},
                              {"synth_single_class", d.synth_single_class}});

  j["kway_marginal_tv"] = json::array();
  for (const KwayEntry& e : kway)
    j["kway_marginal_tv"].push_back(
        {{"k", e.k}, {"repeats", e.repeats}, {"score", e.score}});

  j["pca"] = {{"explained_variance", pca_explained_variance},
              {"wasserstein_score", opt_to_json(pca_wasserstein)}};

  if (label_task) {
    j["label_prediction"] = {
        {"feature", label_feature},
        {"accuracy", label_task->accuracy},
        {"f1", label_task->f1},
        {"synth_single_class", label_task->synth_single_class}};
  }
  // The paper's symmetrized-KL reading of JSD is undefined on disjoint
  // supports; scores here use the mixture form.
  j["notes"] = {"jsd uses the mixture form (always defined)"};
  return j.dump(2);
}

void write_plot_tables(const MetricReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "probability_pairs.csv");
    data::write_csv_row(out, {"feature", "p_real", "p_synthetic"});
    for (const ProbabilityPair& p : report.probability)
      data::write_csv_row(out, {p.feature, fmt(p.p_real), fmt(p.p_synth)});
  }
  {
    std::ofstream out(fs::path(out_dir) / "prediction_pairs.csv");
    data::write_csv_row(out, {"feature", "kind", "score_real",
                              "score_synthetic", "auroc_real",
                              "auroc_synthetic", "synth_single_class"});
    for (const PredictionScore& s : report.prediction)
      data::write_csv_row(
          out, {s.feature, s.is_regression ? "regression" : "classification",
                opt_fmt(s.score_real), opt_fmt(s.score_synth),
                opt_fmt(s.auroc_real), opt_fmt(s.auroc_synth),
                s.synth_single_class ? "1" : "0"});
  }
  {
    std::ofstream out(fs::path(out_dir) / "diversity.csv");
    data::write_csv_row(
        out, {"feature", "p1", "mu", "jsd", "mu_smoothed_kl",
              "synth_single_class"});
    for (const DiversityRow& d : report.diversity)
      data::write_csv_row(out, {d.feature, fmt(d.p1), opt_fmt(d.mu),
                                fmt(d.jsd_score), opt_fmt(d.mu_kl),
                                d.synth_single_class ? "1" : "0"});
  }
  {
    std::ofstream out(fs::path(out_dir) / "kway_tv.csv");
    data::write_csv_row(out, {"k", "repeats", "score"});
    for (const KwayEntry& e : report.kway)
      data::write_csv_row(out, {std::to_string(e.k),
                                std::to_string(e.repeats), fmt(e.score)});
  }
  for (const HistogramTable& h : report.histograms) {
    std::ofstream out(fs::path(out_dir) /
                      ("histogram_" + sanitize(h.feature) + ".csv"));
    data::write_csv_row(out, {"bin", "real", "synthetic"});
    for (std::size_t i = 0; i < h.labels.size(); ++i)
      data::write_csv_row(
          out, {h.labels[i], fmt(h.real_freq[i]), fmt(h.synth_freq[i])});
  }
  if (report.pca_real.rows() > 0) {
    std::ofstream out(fs::path(out_dir) / "pca_scatter.csv");
    data::write_csv_row(out, {"dataset", "pc1", "pc2"});
    auto dump = [&](const Matrix& m, const char* tag) {
      for (std::size_t i = 0; i < m.rows(); ++i)
        data::write_csv_row(
            out, {tag, fmt(m(i, 0)), fmt(m.cols() > 1 ? m(i, 1) : 0.0)});
    };
    dump(report.pca_real, "real");
    dump(report.pca_synth, "synthetic");
  }
}

}  // namespace dpag::metrics
