#pragma once

#include <vector>

namespace dmem {

// Beta-lag polynomial weights: delta_k ∝ (k/K)^(omega1-1) * (1-k/K)^(omega2-1),
// k = 1..K, normalized to sum 1.
struct BetaLag {
  int K = 12;
  double omega1 = 1.0;
  double omega2 = 1.0;
};

std::vector<double> beta_lag_weights(const BetaLag& spec);

// sum_k delta_k * lags[k-1]; lags ordered most recent first (X_{t-1} .. X_{t-K})
double beta_weighted_sum(const BetaLag& spec, const std::vector<double>& lags);
double beta_weighted_sum(const std::vector<double>& weights, const std::vector<double>& lags);

}  // namespace dmem
