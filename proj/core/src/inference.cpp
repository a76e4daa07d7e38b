#include "dmem/inference.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dmem/evaluation.hpp"

namespace dmem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_positive_residuals(const Eigen::VectorXd& eps, const char* who) {
  for (Eigen::Index i = 0; i < eps.size(); ++i)
    if (!(eps[i] > 0.0)) throw std::domain_error(std::string(who) + " needs residuals > 0");
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& m, const std::vector<std::string>* names) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-12 * std::max(ev.maxCoeff(), 1e-300)) {
    std::ostringstream os;
    os << "matrix of gradient outer products is singular; null-space direction (";
    const Eigen::VectorXd dir = es.eigenvectors().col(0);
    for (Eigen::Index j = 0; j < dir.size(); ++j) {
      if (j) os << ", ";
      if (names && j < static_cast<Eigen::Index>(names->size())) os << (*names)[j] << "=";
      os << dir[j];
    }
    os << ")";
    throw std::runtime_error(os.str());
  }
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Eigen::VectorXd score_gamma(const Eigen::VectorXd& eps, const Eigen::MatrixXd& a) {
  return a.transpose() * (eps.array() - 1.0).matrix() / static_cast<double>(eps.size());
}

Eigen::VectorXd score_lognormal_foc(const Eigen::VectorXd& eps, const Eigen::MatrixXd& a,
                                    double V) {
  const Eigen::ArrayXd le = eps.array().log() + V / 2.0;
  return a.transpose() * le.matrix() / static_cast<double>(eps.size());
}

Eigen::VectorXd assembled_score(ErrorDist dist, const Eigen::VectorXd& eps,
                                const Eigen::MatrixXd& a, double shape) {
  if (dist == ErrorDist::gamma) return shape * score_gamma(eps, a);
  return score_lognormal_foc(eps, a, shape) / shape;
}

Eigen::VectorXd b_gamma(const Eigen::VectorXd& eps, double phi) {
  return ((phi - 1.0) / eps.array() - phi).matrix();
}

Eigen::VectorXd b_lognormal(const Eigen::VectorXd& eps, double V) {
  return (-(1.5 + eps.array().log() / V) / eps.array()).matrix();
}

double loglik_gamma(const std::vector<double>& x, const std::vector<double>& mu, double phi) {
  if (x.size() != mu.size()) throw std::invalid_argument("x/mu length mismatch");
  const double c = phi * std::log(phi) - std::lgamma(phi);
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double eps = x[i] / mu[i];
    ll += c + (phi - 1.0) * std::log(eps) - phi * eps - std::log(mu[i]);
  }
  return ll;
}

double loglik_lognormal(const std::vector<double>& x, const std::vector<double>& mu, double V) {
  if (x.size() != mu.size()) throw std::invalid_argument("x/mu length mismatch");
  double ll = 0.0;
  const double c = -0.5 * std::log(2.0 * M_PI * V);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double le = std::log(x[i] / mu[i]) + V / 2.0;
    ll += c - std::log(x[i]) - le * le / (2.0 * V);
  }
  return ll;
}

double sigma2_gmm(const Eigen::VectorXd& eps) {
  return (eps.array() - 1.0).square().mean();
}

double phi_ml(const Eigen::VectorXd& eps) {
  for (Eigen::Index i = 0; i < eps.size(); ++i)
    if (eps[i] == 0.0) throw std::domain_error("phi_ml unfeasible with zeros");
  require_positive_residuals(eps, "phi_ml");
  const double c = (eps.array().log() - eps.array()).mean();

  const auto g = [c](double phi) { return std::log(phi) + 1.0 - boost::math::digamma(phi) + c; };
  double lo = 1e-4, hi = 1e6;
  double glo = g(lo), ghi = g(hi);
  if (!(glo > 0.0) || !(ghi < 0.0)) {
    if (std::abs(glo) < 1e-12) return lo;
    if (std::abs(ghi) < 1e-12) return hi;
    throw std::runtime_error("phi ML equation has no root in (1e-4, 1e6)");
  }
  double phi = std::sqrt(lo * hi);
  for (int it = 0; it < 200; ++it) {
    const double val = g(phi);
    if (std::abs(val) < 1e-13) return phi;
    if (val > 0.0)
      lo = phi;
    else
      hi = phi;
    const double deriv = 1.0 / phi - boost::math::trigamma(phi);
    double next = phi - val / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) < 1e-14 * phi) return next;
    phi = next;
  }
  return phi;
}

double v_mm(const Eigen::VectorXd& eps) {
  require_positive_residuals(eps, "v_mm");
  return -2.0 * eps.array().log().mean();
}

double v_ml(const Eigen::VectorXd& eps) {
  require_positive_residuals(eps, "v_ml");
  const double m2 = eps.array().log().square().mean();
  return 2.0 * (std::sqrt(m2 + 1.0) - 1.0);
}

double v_logvar(const Eigen::VectorXd& eps) {
  require_positive_residuals(eps, "v_logvar");
  const Eigen::ArrayXd l = eps.array().log();
  const double m = l.mean();
  return (l - m).square().mean();
}

double lognormal_v_cross_moment(const Eigen::VectorXd& eps, double V) {
  require_positive_residuals(eps, "lognormal_v_cross_moment");
  return eps.array().log().mean() / (V * V);
}

GradientA gradient_a(const MuPathFn& mu_path, const Eigen::VectorXd& theta,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const Eigen::Index p = theta.size();
  std::vector<double> base;  // computed lazily, only for one-sided columns
  GradientA out;
  Eigen::VectorXd th = theta;
  // a perturbed filter may reject points the per-coordinate box cannot see
  // (joint persistence constraints); a throwing side counts as unavailable
  const auto try_eval = [&](double value, Eigen::Index j) -> std::optional<std::vector<double>> {
    th[j] = value;
    std::optional<std::vector<double>> mu;
    try {
      mu = mu_path(th);
    } catch (const std::exception&) {
    }
    th[j] = theta[j];
    return mu;
  };
  for (Eigen::Index j = 0; j < p; ++j) {
    const double h = std::max(1e-6 * std::abs(theta[j]), 1e-8);
    std::optional<std::vector<double>> mp, mm;
    if (theta[j] + h <= upper[j]) mp = try_eval(theta[j] + h, j);
    if (theta[j] - h >= lower[j]) mm = try_eval(theta[j] - h, j);
    if (!mp && !mm)
      throw std::runtime_error("parameter " + std::to_string(j) +
                               " too close to both bounds for finite differences");
    if (mp && mm) {
      if (out.a.rows() == 0) out.a.resize(static_cast<Eigen::Index>(mp->size()), p);
      for (std::size_t i = 0; i < mp->size(); ++i)
        out.a(static_cast<Eigen::Index>(i), j) =
            (std::log((*mp)[i]) - std::log((*mm)[i])) / (2.0 * h);
    } else {
      out.one_sided = true;
      if (base.empty()) base = mu_path(theta);
      const auto& ms = mp ? *mp : *mm;
      const double sign = mp ? 1.0 : -1.0;
      if (out.a.rows() == 0) out.a.resize(static_cast<Eigen::Index>(ms.size()), p);
      for (std::size_t i = 0; i < ms.size(); ++i)
        out.a(static_cast<Eigen::Index>(i), j) =
            sign * (std::log(ms[i]) - std::log(base[i])) / h;
    }
  }
  return out;
}

GradientA gradient_a(const MuPathFn& mu_path, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(theta.size(), -kInf);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(theta.size(), kInf);
  return gradient_a(mu_path, theta, lo, hi);
}

VEstimator parse_v_estimator(const std::string& text) {
  if (text == "mm") return VEstimator::mm;
  if (text == "ml") return VEstimator::ml;
  if (text == "logvar") return VEstimator::logvar;
  throw std::invalid_argument("unknown V estimator '" + text + "'");
}

std::string to_string(VEstimator v) {
  switch (v) {
    case VEstimator::mm: return "mm";
    case VEstimator::ml: return "ml";
    default: return "logvar";
  }
}

AvarSet avar_set(const Eigen::MatrixXd& a, ErrorDist dist, double shape, double sigma2) {
  const double n = static_cast<double>(a.rows());
  const Eigen::MatrixXd A = a.transpose() * a / n;
  const Eigen::MatrixXd Ainv = invert_spd(A, nullptr);
  AvarSet out;
  out.sigma2_hat = sigma2;
  out.shape_hat = shape;
  if (dist == ErrorDist::gamma) {
    const double phi = shape;
    out.opg = Ainv / (phi * phi * sigma2);
    out.hessian = Ainv / phi;
    out.sandwich = sigma2 * Ainv;
  } else {
    const double V = shape;
    const Eigen::VectorXd abar = a.colwise().mean().transpose();
    const Eigen::MatrixXd M = A - (V / (V + 2.0)) * abar * abar.transpose();
    const Eigen::MatrixXd avar = V * invert_spd(M, nullptr);
    out.opg = avar;
    out.hessian = avar;
    out.sandwich = avar;
  }
  return out;
}

Eigen::MatrixXd block_sandwich_avar(const Eigen::MatrixXd& H11, const Eigen::VectorXd& H12,
                                    double H22, const Eigen::MatrixXd& I11,
                                    const Eigen::VectorXd& I12, double I22) {
  const Eigen::MatrixXd Ha = H11 - H12 * H12.transpose() / H22;
  const Eigen::VectorXd B = H12 / H22;
  const Eigen::MatrixXd core = I11 - I12 * B.transpose() - B * I12.transpose() +
                               I22 * B * B.transpose();
  const Eigen::MatrixXd Hainv = Ha.inverse();
  return Hainv * core * Hainv.transpose();
}

Eigen::VectorXd se_from_avar(const Eigen::MatrixXd& avar, std::size_t n_obs) {
  Eigen::VectorXd se(avar.rows());
  for (Eigen::Index j = 0; j < avar.rows(); ++j)
    se[j] = avar(j, j) >= 0.0 ? std::sqrt(avar(j, j) / static_cast<double>(n_obs)) : kNaN;
  return se;
}

MemEstimator parse_mem_estimator(const std::string& text) {
  if (text == "ml") return MemEstimator::ml;
  if (text == "gmm") return MemEstimator::gmm;
  throw std::invalid_argument("unknown estimator '" + text + "'");
}

std::string to_string(MemEstimator e) { return e == MemEstimator::ml ? "ml" : "gmm"; }

namespace {

void attach_diagnostics(FitResult& fit) {
  for (int lag : {5, 10, 20}) {
    try {
      fit.ljung_box[lag] = ljung_box(fit.diag_residuals, lag);
    } catch (const std::exception& e) {
      fit.notes.push_back("ljung-box lag " + std::to_string(lag) + " skipped: " + e.what());
    }
  }
}

bool near_boundary(const Eigen::VectorXd& u) {
  for (Eigen::Index j = 0; j < u.size(); ++j)
    if (std::abs(u[j]) > 16.0) return true;
  return false;
}

}  // namespace

FitResult fit_mem(const PathProblem& problem, const MemFitOptions& options) {
  if (problem.x.empty()) throw std::invalid_argument("empty series");
  const std::size_t n = problem.x.size();
  const Eigen::VectorXd x = to_eigen(problem.x);

  bool has_zero = false;
  for (double v : problem.x) {
    if (v < 0.0) throw std::domain_error("negative observation in nonnegative series");
    if (v == 0.0) has_zero = true;
  }

  FitResult fit;
  fit.model = problem.model;
  fit.param_names = problem.param_names;

  MemEstimator route = options.estimator;
  if (options.dist == ErrorDist::lognormal && has_zero)
    throw std::domain_error("log-normal likelihood unfeasible with zero observations");
  if (options.dist == ErrorDist::gamma && route == MemEstimator::ml && has_zero) {
    route = MemEstimator::gmm;
    fit.notes.push_back("zeros present: Gamma ML routed through the GMM criterion");
  }

  const auto mu_of_u = [&](const Eigen::VectorXd& u) {
    return problem.mu_path(problem.theta_from_u(u));
  };
  // filters throw when a trial point leaves the feasible region (saturated
  // transforms can land exactly on a persistence boundary); the line search
  // treats those points as +inf
  const auto exp_qml = [&](const Eigen::VectorXd& u) {
    try {
      const auto mu = mu_of_u(u);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) return kInf;
        s += std::log(mu[i]) + problem.x[i] / mu[i];
      }
      return s / static_cast<double>(n);
    } catch (const std::exception&) {
      return kInf;
    }
  };
  const auto gmm_crit = [&](const Eigen::VectorXd& u) {
    try {
      const Eigen::VectorXd theta = problem.theta_from_u(u);
      const auto mu = problem.mu_path(theta);
      Eigen::VectorXd eps(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) return kInf;
        eps[static_cast<Eigen::Index>(i)] = problem.x[i] / mu[i];
      }
      const GradientA ga = gradient_a(problem.mu_path, theta, problem.lower, problem.upper);
      return score_gamma(eps, ga.a).squaredNorm();
    } catch (const std::exception&) {
      return kInf;
    }
  };

  const Eigen::VectorXd u0 = problem.u_from_theta(problem.theta0);
  Eigen::VectorXd u_hat;
  double V_hat = kNaN;

  if (options.dist == ErrorDist::gamma) {
    const Objective crit = route == MemEstimator::ml ? Objective(exp_qml) : Objective(gmm_crit);
    BfgsResult r;
    if (route == MemEstimator::ml) {
      r = minimize_bfgs(crit, u0, options.bfgs);
    } else {
      // squaring the moment norm squares the curvature conditioning, so get a
      // first-stage point from the smooth QML criterion (same FOC) and polish
      const BfgsResult stage1 = minimize_bfgs(Objective(exp_qml), u0, options.bfgs);
      r = minimize_bfgs(crit, stage1.x, options.bfgs);
      r.iterations += stage1.iterations;
    }
    // convergence is declared on the unconstrained scale, but the first-order
    // bound checked below lives on the natural scale. The QML objective is a
    // mean of n large summands whose rounding noise saturates the attainable
    // descent before that bound is met on long series; the moment vector sums
    // mean-zero terms and stays evaluable to machine precision, so polish the
    // accepted point with damped Newton steps on the moment system (Newton
    // also handles the component-model ridge that defeats descent on the
    // squared norm)
    const auto score_at = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      const Eigen::VectorXd theta = problem.theta_from_u(u);
      const auto mu_u = problem.mu_path(theta);
      Eigen::VectorXd eps_u(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mu_u[i] > 0.0) || !std::isfinite(mu_u[i]))
          throw std::runtime_error("nonpositive mean inside the feasible region");
        eps_u[static_cast<Eigen::Index>(i)] = problem.x[i] / mu_u[i];
      }
      const GradientA ga_u = gradient_a(problem.mu_path, theta, problem.lower, problem.upper);
      return score_gamma(eps_u, ga_u.a);
    };
    if (r.converged) {
      Eigen::VectorXd u = r.x;
      Eigen::VectorXd s_vec = score_at(u);
      const Eigen::Index p = u.size();
      int rounds = 0;
      while (s_vec.norm() > 0.5e-6 * (1.0 + problem.theta_from_u(u).norm()) && rounds < 80) {
        bool moved = false;
        try {
          Eigen::MatrixXd jac(p, p);
          for (Eigen::Index j = 0; j < p; ++j) {
            const double h = 3e-6 * (1.0 + std::abs(u[j]));
            Eigen::VectorXd up = u, um = u;
            up[j] += h;
            um[j] -= h;
            jac.col(j) = (score_at(up) - score_at(um)) / (2.0 * h);
          }
          const Eigen::VectorXd du =
              jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-s_vec);
          double lam = 1.0;
          for (int ls = 0; ls < 30 && !moved; ++ls, lam *= 0.5) {
            const Eigen::VectorXd u_try = u + lam * du;
            try {
              const Eigen::VectorXd s_try = score_at(u_try);
              if (s_try.norm() < s_vec.norm()) {
                u = u_try;
                s_vec = s_try;
                moved = true;
              }
            } catch (const std::exception&) {
            }
          }
        } catch (const std::exception&) {
        }
        ++rounds;
        if (!moved) break;
      }
      if (rounds > 0) {
        r.x = u;
        r.iterations += rounds;
        r.value = route == MemEstimator::ml ? exp_qml(u) : s_vec.squaredNorm();
      }
    }
    u_hat = r.x;
    fit.criterion = r.value;
    fit.iterations = r.iterations;
    fit.converged = r.converged;
    if (!r.converged) fit.notes.push_back("optimizer: " + r.message);
  } else {
    // alternate theta at fixed V with V updates from the residuals
    Eigen::VectorXd u = u0;
    {
      const auto mu = mu_of_u(u);
      Eigen::VectorXd eps0(n);
      for (std::size_t i = 0; i < n; ++i) eps0[static_cast<Eigen::Index>(i)] = problem.x[i] / mu[i];
      V_hat = std::max(v_mm(eps0), 1e-8);
    }
    Eigen::VectorXd theta_prev = problem.theta_from_u(u);
    bool settled = false;
    int total_iter = 0;
    BfgsResult r;
    for (int cycle = 0; cycle < 200; ++cycle) {
      const double V = V_hat;
      const auto theta_obj = [&](const Eigen::VectorXd& uu) {
        try {
          const auto mu = mu_of_u(uu);
          double s = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) return kInf;
            const double le = std::log(problem.x[i] / mu[i]) + V / 2.0;
            s += le * le;
          }
          return s / static_cast<double>(n);
        } catch (const std::exception&) {
          return kInf;
        }
      };
      r = minimize_bfgs(theta_obj, u, options.bfgs);
      u = r.x;
      total_iter += r.iterations;
      const Eigen::VectorXd theta = problem.theta_from_u(u);
      const auto mu = problem.mu_path(theta);
      Eigen::VectorXd eps(n);
      for (std::size_t i = 0; i < n; ++i) eps[static_cast<Eigen::Index>(i)] = problem.x[i] / mu[i];
      double V_new = 0.0;
      switch (options.v_estimator) {
        case VEstimator::mm: V_new = v_mm(eps); break;
        case VEstimator::ml: V_new = v_ml(eps); break;
        case VEstimator::logvar: V_new = v_logvar(eps); break;
      }
      const double delta =
          std::max((theta - theta_prev).cwiseAbs().maxCoeff(), std::abs(V_new - V_hat));
      theta_prev = theta;
      V_hat = V_new;
      if (delta < 1e-7) {
        settled = true;
        break;
      }
    }
    if (!settled) throw std::runtime_error("theta/V alternation did not settle within 200 cycles");
    u_hat = u;
    fit.criterion = r.value;
    fit.iterations = total_iter;
    fit.converged = r.converged;
  }

  fit.theta = problem.theta_from_u(u_hat);
  fit.boundary = near_boundary(u_hat);
  if (fit.boundary) fit.notes.push_back("estimate near constraint boundary; flagged non-identified");

  const auto mu = problem.mu_path(fit.theta);
  Eigen::VectorXd eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[static_cast<Eigen::Index>(i)] = problem.x[i] / mu[i];

  const GradientA ga = gradient_a(problem.mu_path, fit.theta, problem.lower, problem.upper);
  if (ga.one_sided) fit.notes.push_back("gradient rows used one-sided steps near a bound");

  fit.sigma2 = sigma2_gmm(eps);

  if (options.dist == ErrorDist::gamma) {
    fit.estimator = route == MemEstimator::ml ? "ml_gamma" : "gmm";
    const double phi = fit.sigma2 > 1e-14 ? 1.0 / fit.sigma2 : 1e14;
    fit.shape = phi;
    fit.score_norm = score_gamma(eps, ga.a).norm();
    AvarSet av = avar_set(ga.a, ErrorDist::gamma, phi, fit.sigma2);
    fit.se_opg = se_from_avar(av.opg, n);
    fit.se_hessian = se_from_avar(av.hessian, n);
    fit.se_sandwich = se_from_avar(av.sandwich, n);
    fit.avar_sandwich = av.sandwich;
    fit.loglik = has_zero ? kNaN : loglik_gamma(problem.x, mu, phi);
    if (has_zero) fit.notes.push_back("gamma log-likelihood undefined with zeros; criterion reported");
    if (options.report_phi_ml && !has_zero) fit.context["phi_ml"] = phi_ml(eps);
  } else {
    fit.estimator = "ml_lognormal";
    fit.shape = V_hat;
    fit.score_norm = score_lognormal_foc(eps, ga.a, V_hat).norm();
    AvarSet av = avar_set(ga.a, ErrorDist::lognormal, V_hat, fit.sigma2);
    fit.se_opg = se_from_avar(av.opg, n);
    fit.se_hessian = se_from_avar(av.hessian, n);
    fit.se_sandwich = se_from_avar(av.sandwich, n);
    fit.avar_sandwich = av.sandwich;
    fit.loglik = loglik_lognormal(problem.x, mu, V_hat);
  }

  if (fit.score_norm > 1e-6 * (1.0 + fit.theta.norm())) {
    fit.converged = false;
    fit.notes.push_back("first-order conditions not met at the reported optimum");
  }

  if (problem.full_path) {
    fit.path = problem.full_path(fit.theta);
  } else {
    fit.path.mu = mu;
    fit.path.tau = mu;
    fit.path.xi.assign(n, 1.0);
    fit.path.residuals.assign(eps.data(), eps.data() + n);
  }
  fit.diag_residuals.assign(eps.data(), eps.data() + n);
  attach_diagnostics(fit);
  return fit;
}

FitResult fit_gaussian_ml(const GaussianMlProblem& problem, const BfgsOptions& options) {
  const auto neg_mean_ll = [&](const Eigen::VectorXd& u) {
    try {
      const Eigen::VectorXd ll = problem.obs_loglik(problem.theta_from_u(u));
      const double m = ll.mean();
      return std::isfinite(m) ? -m : kInf;
    } catch (const std::exception&) {
      return kInf;
    }
  };

  const BfgsResult r = minimize_bfgs(neg_mean_ll, problem.u_from_theta(problem.theta0), options);

  FitResult fit;
  fit.model = problem.model;
  fit.estimator = "ml_gaussian";
  fit.param_names = problem.param_names;
  fit.theta = problem.theta_from_u(r.x);
  fit.criterion = r.value;
  fit.iterations = r.iterations;
  fit.converged = r.converged;
  fit.boundary = near_boundary(r.x);
  if (!r.converged) fit.notes.push_back("optimizer: " + r.message);
  if (fit.boundary) fit.notes.push_back("estimate near constraint boundary; flagged non-identified");

  const Eigen::VectorXd ll = problem.obs_loglik(fit.theta);
  const auto n = ll.size();
  fit.loglik = ll.sum();

  const Eigen::Index p = fit.theta.size();
  // per-observation scores and the Hessian by finite differences in the
  // natural space; a boundary-adjacent optimum can make a perturbed filter
  // throw, in which case the error machinery below degrades to NaN
  Eigen::MatrixXd S(n, p);
  Eigen::MatrixXd H(p, p);
  bool fd_ok = true;
  try {
    Eigen::VectorXd th = fit.theta;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(fit.theta[j]));
      th[j] = fit.theta[j] + h;
      const Eigen::VectorXd lp = problem.obs_loglik(th);
      th[j] = fit.theta[j] - h;
      const Eigen::VectorXd lm = problem.obs_loglik(th);
      th[j] = fit.theta[j];
      S.col(j) = (lp - lm) / (2.0 * h);
    }
    fit.score_norm = (S.colwise().mean()).norm();

    const auto mean_ll = [&](const Eigen::VectorXd& t) { return problem.obs_loglik(t).mean(); };
    for (Eigen::Index j = 0; j < p; ++j) {
      const double hj = 1e-4 * (1.0 + std::abs(fit.theta[j]));
      for (Eigen::Index k = j; k < p; ++k) {
        const double hk = 1e-4 * (1.0 + std::abs(fit.theta[k]));
        Eigen::VectorXd t = fit.theta;
        t[j] += hj; t[k] += hk; const double fpp = mean_ll(t);
        t = fit.theta; t[j] += hj; t[k] -= hk; const double fpm = mean_ll(t);
        t = fit.theta; t[j] -= hj; t[k] += hk; const double fmp = mean_ll(t);
        t = fit.theta; t[j] -= hj; t[k] -= hk; const double fmm = mean_ll(t);
        H(j, k) = H(k, j) = (fpp - fpm - fmp + fmm) / (4.0 * hj * hk);
      }
    }
  } catch (const std::exception& e) {
    fd_ok = false;
    fit.notes.push_back(std::string("derivatives unavailable at the optimum: ") + e.what());
    fit.score_norm = kNaN;
  }
  if (!fd_ok) {
    fit.se_opg = fit.se_hessian = fit.se_sandwich = Eigen::VectorXd::Constant(p, kNaN);
    fit.avar_sandwich = Eigen::MatrixXd::Constant(p, p, kNaN);
    return fit;
  }

  const Eigen::MatrixXd I = S.transpose() * S / static_cast<double>(n);
  const Eigen::MatrixXd negH = -H;
  bool spd = true;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(negH);
    if (es.eigenvalues().minCoeff() <= 0.0) spd = false;
  }
  if (!spd) {
    fit.notes.push_back("hessian not negative definite at the optimum; sandwich errors unreliable");
    fit.se_opg = fit.se_hessian = fit.se_sandwich = Eigen::VectorXd::Constant(p, kNaN);
    fit.avar_sandwich = Eigen::MatrixXd::Constant(p, p, kNaN);
  } else {
    const Eigen::MatrixXd Hinv = negH.inverse();
    fit.avar_sandwich = Hinv * I * Hinv;
    fit.se_sandwich = se_from_avar(fit.avar_sandwich, static_cast<std::size_t>(n));
    fit.se_hessian = se_from_avar(Hinv, static_cast<std::size_t>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esI(I);
    if (esI.eigenvalues().minCoeff() > 0.0)
      fit.se_opg = se_from_avar(I.inverse(), static_cast<std::size_t>(n));
    else
      fit.se_opg = Eigen::VectorXd::Constant(p, kNaN);
  }
  return fit;
}

}  // namespace dmem
