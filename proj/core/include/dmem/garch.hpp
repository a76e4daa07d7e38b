#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dmem/inference.hpp"
#include "dmem/mem.hpp"
#include "dmem/midas.hpp"
#include "dmem/panel.hpp"

namespace dmem {

// h_i = c + (alpha1 + gamma1 * 1(r_{i-1} < 0)) r_{i-1}^2 + beta1 h_{i-1}
struct GjrParams {
  double c = 0.0;
  double alpha1 = 0.0;
  double gamma1 = 0.0;
  double beta1 = 0.0;
  void validate() const;
};

double gjr_step(const GjrParams& p, double h_prev, double r_prev);
std::vector<double> filter_gjr(const std::vector<double>& r, const GjrParams& p, double h1);

struct GmParams {
  double alpha1 = 0.0;
  double gamma1 = 0.0;
  double beta1 = 0.0;
  double m = 0.0;
  double zeta = 0.0;
  BetaLag lag;
};

struct DagmParams {
  double alpha1 = 0.0;
  double gamma1 = 0.0;
  double beta1 = 0.0;
  double m = 0.0;
  double zeta_plus = 0.0;
  double zeta_minus = 0.0;
  BetaLag lag_plus, lag_minus;
};

struct GarchMidasPath {
  std::vector<double> tau;
  std::vector<double> xi;
  std::vector<double> h;  // tau * xi
};

// r must already be demeaned; series supplies periods and the macro map
GarchMidasPath filter_gm(const PanelSeries& series, const std::vector<double>& r,
                         const GmParams& p);
GarchMidasPath filter_dagm(const PanelSeries& series, const std::vector<double>& r,
                           const DagmParams& p);

// log h_i = c + beta1 log h_{i-1} + alpha1 log rvol_{i-1}
// measurement: log rvol_i = xi_m + phi_m log h_i + tau1 eta_i + tau2 (eta_i^2 - 1) + u_i
struct RgarchParams {
  double c = 0.0;
  double beta1 = 0.0;
  double alpha1 = 0.0;
  double xi_m = 0.0;
  double phi_m = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double sigma_u2 = 0.0;
};

std::vector<double> filter_rgarch(const std::vector<double>& r, const std::vector<double>& rvol,
                                  const RgarchParams& p, double h1);

Eigen::VectorXd garch_obs_loglik(const std::vector<double>& r, const std::vector<double>& h);
Eigen::VectorXd rgarch_obs_loglik(const std::vector<double>& r, const std::vector<double>& rvol,
                                  const RgarchParams& p, double h1);

double variance_to_vol_forecast(double h);

// Gaussian (Q)ML fits; returns are demeaned by the window mean, recorded in
// context["ret_mean"] along with the initial variance context["h1"]
FitResult fit_gjr(const PanelSeries& series, const BfgsOptions& opt = {});
FitResult fit_gm(const PanelSeries& series, int K, const BfgsOptions& opt = {});
FitResult fit_dagm(const PanelSeries& series, int K, const BfgsOptions& opt = {});
FitResult fit_rgarch(const PanelSeries& series, const BfgsOptions& opt = {});

PanelSeries simulate_gjr(const GjrParams& p, const SimulateOptions& opt);
PanelSeries simulate_gm(const GmParams& p, const SimulateOptions& opt);
PanelSeries simulate_rgarch(const RgarchParams& p, double h1, const SimulateOptions& opt);

}  // namespace dmem
