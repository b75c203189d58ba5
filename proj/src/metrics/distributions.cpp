#include "dpautogan/metrics/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpag::metrics {

void DiscreteDist::validate() const {
  if (categories.size() != probs.size())
    throw std::invalid_argument("category/probability length mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("probabilities do not sum to 1");
}

DiscreteDist marginal_of(const data::RawDataset& ds, std::size_t column) {
  const data::ColumnSpec& col = ds.schema.columns.at(column);
  if (col.kind == data::ColumnKind::Continuous)
    throw std::invalid_argument("marginal_of needs a categorical column");
  DiscreteDist d;
  d.categories = col.categories;
  d.probs.assign(col.categories.size(), 0.0);
  for (std::int32_t c : ds.cat[column]) d.probs[c] += 1.0;
  for (double& p : d.probs) p /= static_cast<double>(ds.rows);
  return d;
}

double auto_mu(const DiscreteDist& P) {
  const double p1 = *std::max_element(P.probs.begin(), P.probs.end());
  if (p1 >= 1.0)
    throw std::invalid_argument(
        "auto mu is undefined for a single-class distribution; pass mu");
  return std::exp(-1.0 / (1.0 - p1));
}

double mu_smoothed_kl(const DiscreteDist& P, const DiscreteDist& Q,
                      std::optional<double> mu) {
  P.validate();
  Q.validate();
  if (P.categories != Q.categories)
    throw std::invalid_argument("distributions have different supports");
  const double m = mu ? *mu : auto_mu(P);
  if (!(m > 0.0)) throw std::invalid_argument("mu must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < P.probs.size(); ++i) {
    if (P.probs[i] <= 0.0) continue;  // sum over supp(P)
    s += (P.probs[i] + m) * std::log((P.probs[i] + m) / (Q.probs[i] + m));
  }
  return s;
}

double jsd(const DiscreteDist& P, const DiscreteDist& Q) {
  P.validate();
  Q.validate();
  if (P.categories != Q.categories)
    throw std::invalid_argument("distributions have different supports");
  double s = 0.0;
  for (std::size_t i = 0; i < P.probs.size(); ++i) {
    const double p = P.probs[i], q = Q.probs[i];
    const double m = 0.5 * (p + q);
    if (p > 0.0) s += 0.5 * p * std::log(p / m);
    if (q > 0.0) s += 0.5 * q * std::log(q / m);
  }
  return std::max(s, 0.0);
}

}  // namespace dpag::metrics
