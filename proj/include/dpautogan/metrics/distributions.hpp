#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpautogan/data/dataset.hpp"

namespace dpag::metrics {

// Probability vector over an ordered category list; zero-probability
// categories are retained so supports stay aligned with the schema.
struct DiscreteDist {
  std::vector<std::string> categories;
  std::vector<double> probs;

  void validate() const;  // normalization within 1e-9, no negatives
};

// Empirical marginal of a categorical or binary column.
DiscreteDist marginal_of(const data::RawDataset& ds, std::size_t column);

// sum_{x in supp(P)} (P(x)+mu) log((P(x)+mu)/(Q(x)+mu)).
// Without an explicit mu, uses mu = exp(-1/(1-p1)) with p1 = max_i P(i);
// that rule is undefined at p1 = 1 and throws, callers must then pass mu.
double mu_smoothed_kl(const DiscreteDist& P, const DiscreteDist& Q,
                      std::optional<double> mu = std::nullopt);

double auto_mu(const DiscreteDist& P);

// Jensen-Shannon divergence in mixture form,
// JSD = KL(P||M)/2 + KL(Q||M)/2 with M = (P+Q)/2, in nats; always defined,
// bounded by log 2.
double jsd(const DiscreteDist& P, const DiscreteDist& Q);

}  // namespace dpag::metrics
