#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmem/mem.hpp"
#include "dmem/optimize.hpp"

namespace dmem {

// per-day conditional mean as a function of the natural-space parameter vector
using MuPathFn = std::function<std::vector<double>(const Eigen::VectorXd&)>;

struct ScorePieces {
  Eigen::MatrixXd a;    // N x p, row i = grad_theta ln mu_i
  Eigen::VectorXd eps;  // x / mu
  Eigen::VectorXd b;    // d ln f_eps / d eps at eps_i
};

struct AvarSet {
  Eigen::MatrixXd opg;
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd sandwich;
  double sigma2_hat = 0.0;
  double shape_hat = 0.0;  // Gamma phi or LogNormal V
};

struct FitResult {
  std::string model;
  std::string estimator;  // ml_gamma | gmm | ml_lognormal | ml_gaussian | ols
  std::vector<std::string> param_names;
  Eigen::VectorXd theta;
  Eigen::VectorXd se_opg, se_hessian, se_sandwich;
  Eigen::MatrixXd avar_sandwich;
  double loglik = 0.0;
  double criterion = 0.0;  // optimizer objective at the optimum
  double sigma2 = 0.0;
  double shape = 0.0;
  double score_norm = 0.0;
  bool converged = false;
  bool boundary = false;
  int iterations = 0;
  MeanPath path;
  std::vector<double> diag_residuals;  // series the Ljung-Box runs on
  std::map<int, std::pair<double, double>> ljung_box;  // lag -> (Q, p)
  std::vector<std::string> notes;
  std::map<std::string, double> context;  // frozen constants for forecasting
};

// --- score and distribution pieces ---

// N^-1 sum (eps_i - 1) a_i  (Gamma first-order condition, phi dropped)
Eigen::VectorXd score_gamma(const Eigen::VectorXd& eps, const Eigen::MatrixXd& a);
// N^-1 sum (ln eps_i + V/2) a_i
Eigen::VectorXd score_lognormal_foc(const Eigen::VectorXd& eps, const Eigen::MatrixXd& a,
                                    double V);
// exact gradient of the mean log-likelihood
Eigen::VectorXd assembled_score(ErrorDist dist, const Eigen::VectorXd& eps,
                                const Eigen::MatrixXd& a, double shape);

Eigen::VectorXd b_gamma(const Eigen::VectorXd& eps, double phi);
Eigen::VectorXd b_lognormal(const Eigen::VectorXd& eps, double V);

double loglik_gamma(const std::vector<double>& x, const std::vector<double>& mu, double phi);
double loglik_lognormal(const std::vector<double>& x, const std::vector<double>& mu, double V);

// --- shape estimators ---

double sigma2_gmm(const Eigen::VectorXd& eps);
double phi_ml(const Eigen::VectorXd& eps);  // throws when any eps == 0
double v_mm(const Eigen::VectorXd& eps);    // -2 mean(ln eps)
double v_ml(const Eigen::VectorXd& eps);    // 2 (sqrt(mean(ln^2 eps) + 1) - 1)
double v_logvar(const Eigen::VectorXd& eps);

// sample analog of E(eps * grad_V b) = mean(ln eps) / V^2
double lognormal_v_cross_moment(const Eigen::VectorXd& eps, double V);

// --- gradient rows ---

struct GradientA {
  Eigen::MatrixXd a;
  bool one_sided = false;  // some coordinate used a one-sided step near a bound
};

// central finite differences of ln mu on the full filtered path; relative
// step 1e-6 with absolute floor 1e-8; one-sided next to a bound
GradientA gradient_a(const MuPathFn& mu_path, const Eigen::VectorXd& theta,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
GradientA gradient_a(const MuPathFn& mu_path, const Eigen::VectorXd& theta);

// --- asymptotic variance ---

enum class VEstimator { mm, ml, logvar };
VEstimator parse_v_estimator(const std::string& text);
std::string to_string(VEstimator v);

// Gamma: avar_I = phi^-2 sigma^-2 A^-1, avar_H = phi^-1 A^-1, avar_S = sigma2 A^-1.
// LogNormal: V (A - V/(V+2) a_bar a_bar')^-1 for all three variants.
AvarSet avar_set(const Eigen::MatrixXd& a, ErrorDist dist, double shape, double sigma2);

// avar(theta) from the partitioned Hessian/OPG of a (theta, shape) likelihood:
// (H11 - H12 H22^-1 H21)^-1 [I11 - I12 B' - B I21 + B I22 B'] (...)^-1', B = H12 H22^-1
Eigen::MatrixXd block_sandwich_avar(const Eigen::MatrixXd& H11, const Eigen::VectorXd& H12,
                                    double H22, const Eigen::MatrixXd& I11,
                                    const Eigen::VectorXd& I12, double I22);

Eigen::VectorXd se_from_avar(const Eigen::MatrixXd& avar, std::size_t n_obs);

// --- MEM estimation ---

enum class MemEstimator { ml, gmm };
MemEstimator parse_mem_estimator(const std::string& text);
std::string to_string(MemEstimator e);

// declarative fit problem: natural-space theta with transform callbacks
struct PathProblem {
  std::string model;
  std::vector<std::string> param_names;
  MuPathFn mu_path;
  std::vector<double> x;
  Eigen::VectorXd theta0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> theta_from_u;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> u_from_theta;
  Eigen::VectorXd lower, upper;  // natural-space bounds (for FD flagging / boundary checks)
  // optional decomposition of the fitted path into tau/xi for reporting
  std::function<MeanPath(const Eigen::VectorXd&)> full_path;
};

struct MemFitOptions {
  MemEstimator estimator = MemEstimator::ml;
  ErrorDist dist = ErrorDist::gamma;
  VEstimator v_estimator = VEstimator::mm;
  bool report_phi_ml = false;  // additionally solve the phi ML equation
  BfgsOptions bfgs;
};

FitResult fit_mem(const PathProblem& problem, const MemFitOptions& options = {});

// --- generic Gaussian ML with QML (sandwich) errors, used by the GARCH family ---

struct GaussianMlProblem {
  std::string model;
  std::vector<std::string> param_names;
  // theta -> per-observation log-likelihood contributions
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> obs_loglik;
  Eigen::VectorXd theta0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> theta_from_u;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> u_from_theta;
};

FitResult fit_gaussian_ml(const GaussianMlProblem& problem, const BfgsOptions& options = {});

}  // namespace dmem
