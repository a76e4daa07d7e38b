#include "dmem/midas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dmem {

namespace {

// log of u^p with the conventions 0^0 = 1 and 0^p = 0 for p > 0
double log_pow(double u, double p) {
  if (p == 0.0) return 0.0;
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  return p * std::log(u);
}

}  // namespace

std::vector<double> beta_lag_weights(const BetaLag& spec) {
  if (spec.K < 1) throw std::invalid_argument("beta lag needs K >= 1, got " + std::to_string(spec.K));
  if (!std::isfinite(spec.omega1) || !std::isfinite(spec.omega2))
    throw std::invalid_argument("beta lag shapes must be finite");
  if (spec.omega1 < 1.0 || spec.omega2 < 1.0)
    throw std::invalid_argument("beta lag shapes must be >= 1");

  // K = 1 with omega2 > 1 would evaluate 0^p = 0 for the only term; the
  // normalized weight is 1 by convention
  if (spec.K == 1) return {1.0};

  const int K = spec.K;
  std::vector<double> logw(K);
  double logmax = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= K; ++k) {
    const double u = static_cast<double>(k) / K;
    logw[k - 1] = log_pow(u, spec.omega1 - 1.0) + log_pow(1.0 - u, spec.omega2 - 1.0);
    logmax = std::max(logmax, logw[k - 1]);
  }
  std::vector<double> w(K);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    w[k] = std::exp(logw[k] - logmax);
    sum += w[k];
  }
  for (int k = 0; k < K; ++k) w[k] /= sum;
  return w;
}

double beta_weighted_sum(const std::vector<double>& weights, const std::vector<double>& lags) {
  if (weights.size() != lags.size())
    throw std::invalid_argument("lag vector length " + std::to_string(lags.size()) +
                                " does not match weight count " + std::to_string(weights.size()));
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * lags[k];
  return s;
}

double beta_weighted_sum(const BetaLag& spec, const std::vector<double>& lags) {
  return beta_weighted_sum(beta_lag_weights(spec), lags);
}

}  // namespace dmem
