#include "dpautogan/privacy/rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpag::privacy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Terms this far below the maximum are beneath f64 underflow and dropped.
constexpr double kLogCutoff = 745.0;

const std::vector<int>& order_grid() {
  static const std::vector<int> grid = [] {
    std::vector<int> g;
    for (int a = 2; a <= 256; ++a) g.push_back(a);
    for (int a : {272, 304, 368, 496, 752, 1264, 2048}) g.push_back(a);
    return g;
  }();
  return grid;
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::span<const int> default_orders() { return order_grid(); }

double rdp_subsampled_gaussian(double q, double psi, int alpha) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("sampling rate must lie in (0,1]");
  if (!(psi > 0.0))
    throw std::invalid_argument("noise multiplier must be positive");
  if (alpha < 2) throw std::invalid_argument("order must be an integer >= 2");

  const double log_q = std::log(q);
  const double log_1mq = q < 1.0 ? std::log1p(-q) : -kInf;
  const double inv_2psi2 = 1.0 / (2.0 * psi * psi);

  // log of each binomial term; the sum runs in log space.
  std::vector<double> log_terms;
  log_terms.reserve(alpha + 1);
  double max_term = -kInf;
  for (int k = 0; k <= alpha; ++k) {
    double lt;
    if (q >= 1.0) {
      if (k < alpha) continue;  // (1-q)^(alpha-k) vanishes
      lt = static_cast<double>(k) * (k - 1) * inv_2psi2;
    } else {
      lt = log_choose(alpha, k) + (alpha - k) * log_1mq + k * log_q +
           static_cast<double>(k) * (k - 1) * inv_2psi2;
    }
    log_terms.push_back(lt);
    max_term = std::max(max_term, lt);
  }

  double sum = 0.0;
  for (double lt : log_terms) {
    if (lt < max_term - kLogCutoff) continue;
    sum += std::exp(lt - max_term);
  }
  const double log_sum = max_term + std::log(sum);
  if (!std::isfinite(log_sum)) return kInf;
  const double value = log_sum / (alpha - 1);
  return std::isfinite(value) ? std::max(value, 0.0) : kInf;
}

RdpCurve rdp_curve(double q, double psi, std::span<const int> orders) {
  RdpCurve c;
  c.orders.assign(orders.begin(), orders.end());
  c.values.reserve(orders.size());
  for (int a : orders) c.values.push_back(rdp_subsampled_gaussian(q, psi, a));
  return c;
}

RdpCurve compose_iterations(RdpCurve curve, std::int64_t iterations) {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  for (double& v : curve.values) v *= static_cast<double>(iterations);
  return curve;
}

RdpCurve add_curves(const RdpCurve& a, const RdpCurve& b) {
  RdpCurve out;
  std::size_t i = 0, j = 0;
  while (i < a.orders.size() || j < b.orders.size()) {
    int order;
    double va = kInf, vb = kInf;
    if (j >= b.orders.size() ||
        (i < a.orders.size() && a.orders[i] <= b.orders[j])) {
      order = a.orders[i];
    } else {
      order = b.orders[j];
    }
    if (i < a.orders.size() && a.orders[i] == order) va = a.values[i++];
    if (j < b.orders.size() && b.orders[j] == order) vb = b.values[j++];
    out.orders.push_back(order);
    out.values.push_back(va + vb);
  }
  return out;
}

PrivacySpend to_dp(const RdpCurve& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (curve.orders.empty()) throw std::invalid_argument("empty curve");
  const double log_inv_delta = std::log(1.0 / delta);
  PrivacySpend best;
  best.delta = delta;
  best.epsilon = kInf;
  for (std::size_t i = 0; i < curve.orders.size(); ++i) {
    const int a = curve.orders[i];
    if (a <= 1) throw std::invalid_argument("orders must exceed 1");
    const double eps = curve.values[i] + log_inv_delta / (a - 1);
    if (eps < best.epsilon) {
      best.epsilon = eps;
      best.optimal_order = a;
    }
  }
  if (!std::isfinite(best.epsilon)) throw BudgetUnbounded();
  return best;
}

Lemma1Result lemma1_comparison(const RdpCurve& c1, const RdpCurve& c2,
                               double delta) {
  Lemma1Result r;
  r.combined = to_dp(add_curves(c1, c2), delta);
  r.phase1 = to_dp(c1, delta / 2.0);
  r.phase2 = to_dp(c2, delta / 2.0);
  return r;
}

}  // namespace dpag::privacy
