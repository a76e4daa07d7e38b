#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace dmem {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct BfgsOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;   // on the unconstrained scale
  double step_tol = 1e-12;
  double fd_step = 1e-7;        // relative central-difference step for the gradient
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

// Quasi-Newton minimizer with numeric central-difference gradients and Armijo
// backtracking. The objective may return +inf or NaN outside its domain; the
// line search treats both as "too far".
BfgsResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0,
                         const BfgsOptions& opt = {});

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x,
                                 double rel_step = 1e-7);

// --- parameter transforms (unconstrained u <-> natural theta) ---

// open simplex p_i = exp(u_i) / (1 + sum_j exp(u_j)), sum p_i < 1, p_i > 0
Eigen::VectorXd simplex_from_u(const Eigen::VectorXd& u);
Eigen::VectorXd u_from_simplex(const Eigen::VectorXd& p);

inline double positive_from_u(double u) { return std::exp(u); }
inline double u_from_positive(double v) { return std::log(v); }

inline double lower_bounded_from_u(double u, double lo) { return lo + std::exp(u); }
inline double u_from_lower_bounded(double v, double lo) { return std::log(v - lo); }

inline double unit_from_u(double u) { return 1.0 / (1.0 + std::exp(-u)); }
inline double u_from_unit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace dmem
