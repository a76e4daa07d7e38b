#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dmem/midas.hpp"
#include "dmem/panel.hpp"

namespace dmem {

// xi_i = (1 - a1 - g1/2 - b1) + (a1 + g1*neg_{i-1}) * driver_{i-1} + b1 * xi_{i-1}
struct ShortRunParams {
  double alpha1 = 0.0;
  double gamma1 = 0.0;
  double beta1 = 0.0;
  double delta1 = 0.0;  // loading on an optional pre-de-meaned regressor z

  double persistence() const { return alpha1 + gamma1 / 2.0 + beta1; }
  double intercept() const { return 1.0 - persistence(); }
  void validate() const;  // throws naming the violated bound
};

// tau_i = omega + (a1 + g1*neg_{i-1}) * (x/xi)_{i-1} + b1 * tau_{i-1}
struct LongRunComponentParams {
  double omega_tau = 0.0;
  double alpha1_tau = 0.0;
  double gamma1_tau = 0.0;
  double beta1_tau = 0.0;

  double persistence() const { return alpha1_tau + gamma1_tau / 2.0 + beta1_tau; }
  void validate() const;
};

// tau_t = exp(m + zeta * sum_k delta_k(omega) X_{t-k})
struct MidasLongRunParams {
  double m = 0.0;
  double zeta = 0.0;
  BetaLag lag;
};

struct MeanPath {
  std::vector<double> mu;
  std::vector<double> tau;
  std::vector<double> xi;
  std::vector<double> residuals;  // eps = x / mu

  void finalize(const std::vector<double>& x);  // fills mu = tau*xi and residuals
};

// Shared short-run recursion: driver[i] is the lagged-value ratio already
// divided by its own day's long-run level (x/tau for MEM, r^2/tau for the
// GARCH-MIDAS family). z, when present, enters lagged as + delta1 * z[i-1].
std::vector<double> xi_recursion(const ShortRunParams& p, const std::vector<double>& driver,
                                 const std::vector<unsigned char>& lagged_neg,
                                 const std::vector<double>* z = nullptr);

// One-step kernels reused by the filters
double amem_step(const ShortRunParams& p, double level, double mu_prev, double x_prev,
                 bool neg_prev);
struct ComponentStep {
  double xi;
  double tau;
  double mu;
};
ComponentStep component_step(const ShortRunParams& s, const LongRunComponentParams& l,
                             double x_prev, bool neg_prev, double xi_prev, double tau_prev);
double midas_xi_step(const ShortRunParams& p, double x_prev, double tau_prev_day, bool neg_prev,
                     double xi_prev, double z = 0.0, bool has_z = false);

// mu_i = a0 + (a1 + g1*neg) x_{i-1} + b1 mu_{i-1}, a0 = intercept * level;
// mu_1 = level, which callers set to the estimation-window mean of x
MeanPath filter_amem(const PanelSeries& series, const ShortRunParams& p, double level,
                     const std::vector<double>* z = nullptr);

// joint recursion; xi_1 = 1, tau_1 = sample mean of x unless a frozen
// initial value is supplied (used when re-filtering past an estimation window)
MeanPath filter_component(const PanelSeries& series, const ShortRunParams& s,
                          const LongRunComponentParams& l,
                          const std::vector<double>* z = nullptr,
                          std::optional<double> tau1 = {});

// tau_t per period from macro lags; xi_1 = 1
MeanPath filter_mem_midas(const PanelSeries& series, const ShortRunParams& s,
                          const MidasLongRunParams& l, const std::vector<double>* z = nullptr);

// E(xi^2) under iid unit-mean errors with variance sigma2; exogenous terms excluded
double xi_second_moment(const ShortRunParams& p, double sigma2);

struct ComponentStationarity {
  double e_tau;
  double omega_tau_implied;
};
// mean-stationary E(tau) given the unconditional mean mu of x, and the
// omega_tau implied by that mean
ComponentStationarity component_stationarity(const ShortRunParams& s,
                                             const LongRunComponentParams& l, double mu,
                                             double sigma2);

enum class ErrorDist { gamma, lognormal };
ErrorDist parse_error_dist(const std::string& text);
std::string to_string(ErrorDist d);

struct SimulateOptions {
  std::size_t n_days = 1000;
  ErrorDist dist = ErrorDist::gamma;
  double shape = 5.0;  // Gamma phi, or LogNormal V
  std::uint64_t seed = 1;
  Date start = Date{std::chrono::year{2000} / 1 / 3};
  PeriodFrequency frequency = PeriodFrequency::month;
  // AR(1) macro process for the MIDAS simulator
  double macro_rho = 0.9;
  double macro_sd = 1.0;
};

PanelSeries simulate_amem(const ShortRunParams& p, double level, const SimulateOptions& opt);
PanelSeries simulate_component(const ShortRunParams& s, const LongRunComponentParams& l,
                               const SimulateOptions& opt);
// emits the panel with the simulated macro series attached
PanelSeries simulate_mem_midas(const ShortRunParams& s, const MidasLongRunParams& l,
                               const SimulateOptions& opt);

}  // namespace dmem
