#include "dmem/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmem {

namespace {

bool usable(double v) { return std::isfinite(v); }

}  // namespace

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
  const auto n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = rel_step * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    const double fp = f(xp);
    xp[j] = x[j] - h;
    const double fm = f(xp);
    xp[j] = x[j];
    if (!usable(fp) || !usable(fm))
      throw std::runtime_error("objective not finite near evaluation point (coordinate " +
                               std::to_string(j) + ")");
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

BfgsResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opt) {
  const auto n = x0.size();
  BfgsResult res;
  res.x = x0;
  res.value = f(res.x);
  if (!usable(res.value)) throw std::invalid_argument("objective not finite at starting point");

  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  bool hinv_fresh = true;
  Eigen::VectorXd g = numeric_gradient(f, res.x, opt.fd_step);

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    if (g.norm() <= opt.gradient_tol * (1.0 + std::abs(res.value))) {
      res.converged = true;
      res.message = "gradient below tolerance";
      break;
    }

    Eigen::VectorXd d = -Hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {  // reset on loss of descent direction
      Hinv.setIdentity();
      hinv_fresh = true;
      d = -g;
      slope = g.dot(d);
    }

    // Armijo backtracking
    double step = 1.0;
    const double c1 = 1e-4;
    double fnew = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd xnew;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xnew = res.x + step * d;
      fnew = f(xnew);
      if (usable(fnew) && fnew <= res.value + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!hinv_fresh) {  // stale curvature can poison the direction; retry steepest descent
        Hinv.setIdentity();
        hinv_fresh = true;
        continue;
      }
      // no double-resolution improvement along -g either: flat to machine
      // precision, so classify by the same relaxed bound as the step exit
      res.converged = g.norm() <= 1e2 * opt.gradient_tol * (1.0 + std::abs(res.value));
      res.message = "line search failed";
      break;
    }
    if ((xnew - res.x).norm() <= opt.step_tol * (1.0 + res.x.norm())) {
      res.x = xnew;
      res.value = fnew;
      g = numeric_gradient(f, res.x, opt.fd_step);
      res.converged = g.norm() <= 1e2 * opt.gradient_tol * (1.0 + std::abs(res.value));
      res.message = "step below tolerance";
      break;
    }

    Eigen::VectorXd gnew = numeric_gradient(f, xnew, opt.fd_step);
    const Eigen::VectorXd s = xnew - res.x;
    const Eigen::VectorXd y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::VectorXd Hy = Hinv * y;
      const double yHy = y.dot(Hy);
      // BFGS inverse update
      Hinv += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) -
              (Hy * s.transpose() + s * Hy.transpose()) / sy;
      hinv_fresh = false;
    }
    res.x = xnew;
    res.value = fnew;
    g = gnew;
  }

  res.gradient = g;
  if (res.message.empty()) res.message = "iteration limit reached";
  return res;
}

Eigen::VectorXd simplex_from_u(const Eigen::VectorXd& u) {
  // guard the softmax against overflow
  const double m = std::max(0.0, u.maxCoeff());
  double denom = std::exp(-m);
  Eigen::VectorXd e(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    e[i] = std::exp(u[i] - m);
    denom += e[i];
  }
  return e / denom;
}

Eigen::VectorXd u_from_simplex(const Eigen::VectorXd& p) {
  const double rest = 1.0 - p.sum();
  if (!(rest > 0.0) || (p.array() <= 0.0).any())
    throw std::invalid_argument("point not strictly inside the simplex");
  Eigen::VectorXd u(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) u[i] = std::log(p[i] / rest);
  return u;
}

}  // namespace dmem
