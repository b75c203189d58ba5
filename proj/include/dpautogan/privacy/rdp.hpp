#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dpag::privacy {

// Renyi privacy loss evaluated over an ascending grid of integer orders.
struct RdpCurve {
  std::vector<int> orders;
  std::vector<double> values;  // eps_RDP(alpha), >= 0 or +inf
};

struct PrivacySpend {
  double epsilon = 0.0;
  double delta = 0.0;
  int optimal_order = 0;
};

struct BudgetUnbounded : std::runtime_error {
  BudgetUnbounded() : std::runtime_error("privacy budget unbounded") {}
};

// Integers 2..256 plus a sparse tail out to 2048 so the optimizer never
// clips against the grid edge.
std::span<const int> default_orders();

// RDP of the Poisson-subsampled Gaussian mechanism at integer order
// alpha >= 2:
//   (1/(alpha-1)) * log sum_{k=0}^{alpha} C(alpha,k) (1-q)^(alpha-k) q^k
//                        exp(k(k-1)/(2 psi^2))
// evaluated in log space. Returns +inf if the value is not representable.
double rdp_subsampled_gaussian(double q, double psi, int alpha);

RdpCurve rdp_curve(double q, double psi,
                   std::span<const int> orders = default_orders());

// T-fold self composition: values scaled by T.
RdpCurve compose_iterations(RdpCurve curve, std::int64_t iterations);

// Pointwise sum on the union grid; an order missing from either input
// contributes +inf there (never interpolated downward).
RdpCurve add_curves(const RdpCurve& a, const RdpCurve& b);

// eps = min_alpha value(alpha) + log(1/delta)/(alpha-1); ties break toward
// the smaller order. Throws BudgetUnbounded when every value is infinite.
PrivacySpend to_dp(const RdpCurve& curve, double delta);

struct Lemma1Result {
  PrivacySpend combined;  // add_curves then to_dp at delta
  PrivacySpend phase1;    // to_dp at delta/2
  PrivacySpend phase2;    // to_dp at delta/2
  double savings_ratio() const {
    return 1.0 - combined.epsilon / (phase1.epsilon + phase2.epsilon);
  }
};

// Composing at the RDP level before converting always beats converting each
// phase at delta/2 and summing.
Lemma1Result lemma1_comparison(const RdpCurve& c1, const RdpCurve& c2,
                               double delta);

}  // namespace dpag::privacy
