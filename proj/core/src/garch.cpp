#include "dmem/garch.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "dmem/calendar.hpp"
#include "dmem/evaluation.hpp"

namespace dmem {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

std::vector<unsigned char> lagged_negative_of(const std::vector<double>& r) {
  std::vector<unsigned char> neg(r.size(), 0);
  for (std::size_t i = 1; i < r.size(); ++i) neg[i] = r[i - 1] < 0.0 ? 1 : 0;
  return neg;
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> demean(const std::vector<double>& r, double m) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] - m;
  return out;
}

// per-day long-run level from a per-period rule
std::vector<double> per_day_tau(const PanelSeries& series,
                                const std::function<double(const PeriodId&)>& tau_of) {
  std::vector<double> tau(series.size());
  PeriodId current{};
  double t = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const PeriodId p = series.period(i);
    if (i == 0 || !(p == current)) {
      current = p;
      t = tau_of(p);
    }
    tau[i] = t;
  }
  return tau;
}

ShortRunParams short_run_of(double a, double g, double b) {
  ShortRunParams s;
  s.alpha1 = a;
  s.gamma1 = g;
  s.beta1 = b;
  return s;
}

PanelSeries assemble_return_panel(const std::vector<double>& r, const std::vector<double>& rvol,
                                  const SimulateOptions& opt) {
  const auto dates = business_days(opt.start, r.size());
  std::vector<DayObs> days(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) days[i] = {dates[i], r[i], rvol[i]};
  return PanelSeries::from_days(std::move(days), opt.frequency);
}

}  // namespace

void GjrParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("gjr const must be > 0");
  if (alpha1 < 0.0 || beta1 < 0.0) throw std::invalid_argument("gjr alpha1/beta1 must be >= 0");
  if (alpha1 + gamma1 < 0.0) throw std::invalid_argument("gjr alpha1 + gamma1 must be >= 0");
  if (alpha1 + gamma1 / 2.0 + beta1 >= 1.0)
    throw std::invalid_argument("gjr alpha1 + gamma1/2 + beta1 must be < 1");
}

double gjr_step(const GjrParams& p, double h_prev, double r_prev) {
  return p.c + (p.alpha1 + (r_prev < 0.0 ? p.gamma1 : 0.0)) * r_prev * r_prev + p.beta1 * h_prev;
}

std::vector<double> filter_gjr(const std::vector<double>& r, const GjrParams& p, double h1) {
  p.validate();
  if (!(h1 > 0.0)) throw std::invalid_argument("initial variance must be > 0");
  std::vector<double> h(r.size());
  if (r.empty()) return h;
  h[0] = h1;
  for (std::size_t i = 1; i < r.size(); ++i) h[i] = gjr_step(p, h[i - 1], r[i - 1]);
  return h;
}

GarchMidasPath filter_gm(const PanelSeries& series, const std::vector<double>& r,
                         const GmParams& p) {
  if (r.size() != series.size()) throw std::invalid_argument("return/panel length mismatch");
  const auto weights = beta_lag_weights(p.lag);
  GarchMidasPath path;
  path.tau = per_day_tau(series, [&](const PeriodId& t) {
    return std::exp(p.m + p.zeta * beta_weighted_sum(weights, series.macro_lags(t, p.lag.K)));
  });
  std::vector<double> driver(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) driver[i] = r[i] * r[i] / path.tau[i];
  path.xi = xi_recursion(short_run_of(p.alpha1, p.gamma1, p.beta1), driver,
                         lagged_negative_of(r));
  path.h.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) path.h[i] = path.tau[i] * path.xi[i];
  return path;
}

GarchMidasPath filter_dagm(const PanelSeries& series, const std::vector<double>& r,
                           const DagmParams& p) {
  if (r.size() != series.size()) throw std::invalid_argument("return/panel length mismatch");
  const auto wp = beta_lag_weights(p.lag_plus);
  const auto wm = beta_lag_weights(p.lag_minus);
  GarchMidasPath path;
  path.tau = per_day_tau(series, [&](const PeriodId& t) {
    const auto lp = series.macro_lags(t, p.lag_plus.K);
    const auto lm = series.macro_lags(t, p.lag_minus.K);
    double sp = 0.0, sm = 0.0;
    for (int k = 0; k < p.lag_plus.K; ++k)
      if (lp[static_cast<std::size_t>(k)] >= 0.0)
        sp += wp[static_cast<std::size_t>(k)] * lp[static_cast<std::size_t>(k)];
    for (int k = 0; k < p.lag_minus.K; ++k)
      if (lm[static_cast<std::size_t>(k)] < 0.0)
        sm += wm[static_cast<std::size_t>(k)] * lm[static_cast<std::size_t>(k)];
    return std::exp(p.m + p.zeta_plus * sp + p.zeta_minus * sm);
  });
  std::vector<double> driver(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) driver[i] = r[i] * r[i] / path.tau[i];
  path.xi = xi_recursion(short_run_of(p.alpha1, p.gamma1, p.beta1), driver,
                         lagged_negative_of(r));
  path.h.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) path.h[i] = path.tau[i] * path.xi[i];
  return path;
}

std::vector<double> filter_rgarch(const std::vector<double>& r, const std::vector<double>& rvol,
                                  const RgarchParams& p, double h1) {
  if (r.size() != rvol.size()) throw std::invalid_argument("return/rvol length mismatch");
  if (!(h1 > 0.0)) throw std::invalid_argument("initial variance must be > 0");
  for (double v : rvol)
    if (!(v > 0.0)) throw std::domain_error("rgarch needs strictly positive realized volatility");
  std::vector<double> h(r.size());
  if (r.empty()) return h;
  double logh = std::log(h1);
  h[0] = h1;
  for (std::size_t i = 1; i < r.size(); ++i) {
    logh = p.c + p.beta1 * logh + p.alpha1 * std::log(rvol[i - 1]);
    h[i] = std::exp(logh);
  }
  return h;
}

Eigen::VectorXd garch_obs_loglik(const std::vector<double>& r, const std::vector<double>& h) {
  Eigen::VectorXd ll(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
      ll.setConstant(-std::numeric_limits<double>::infinity());
      return ll;
    }
    ll[static_cast<Eigen::Index>(i)] = -0.5 * (kLog2Pi + std::log(h[i]) + r[i] * r[i] / h[i]);
  }
  return ll;
}

Eigen::VectorXd rgarch_obs_loglik(const std::vector<double>& r, const std::vector<double>& rvol,
                                  const RgarchParams& p, double h1) {
  const auto h = filter_rgarch(r, rvol, p, h1);
  Eigen::VectorXd ll(static_cast<Eigen::Index>(r.size()));
  if (!(p.sigma_u2 > 0.0)) {
    ll.setConstant(-std::numeric_limits<double>::infinity());
    return ll;
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
      ll.setConstant(-std::numeric_limits<double>::infinity());
      return ll;
    }
    const double eta = r[i] / std::sqrt(h[i]);
    const double u = std::log(rvol[i]) - p.xi_m - p.phi_m * std::log(h[i]) - p.tau1 * eta -
                     p.tau2 * (eta * eta - 1.0);
    ll[static_cast<Eigen::Index>(i)] =
        -0.5 * (kLog2Pi + std::log(h[i]) + eta * eta) -
        0.5 * (kLog2Pi + std::log(p.sigma_u2) + u * u / p.sigma_u2);
  }
  return ll;
}

double variance_to_vol_forecast(double h) {
  if (h < 0.0) throw std::domain_error("variance forecast must be >= 0");
  return std::sqrt(h);
}

FitResult fit_gjr(const PanelSeries& series, const BfgsOptions& opt) {
  const auto raw = series.ret();
  const double ret_mean = sample_mean(raw);
  const auto r = demean(raw, ret_mean);
  double h1 = 0.0;
  for (double v : r) h1 += v * v;
  h1 /= static_cast<double>(r.size());

  GaussianMlProblem prob;
  prob.model = "gjr";
  prob.param_names = {"const", "alpha1", "gamma1", "beta1"};
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    const Eigen::Vector3d p = simplex_from_u(u.tail(3));
    Eigen::VectorXd th(4);
    th << positive_from_u(u[0]), p[0], 2.0 * p[1], p[2];
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(4);
    u[0] = u_from_positive(th[0]);
    Eigen::Vector3d p(th[1], th[2] / 2.0, th[3]);
    u.tail(3) = u_from_simplex(p);
    return u;
  };
  prob.theta0 = Eigen::VectorXd(4);
  prob.theta0 << 0.1 * h1, 0.05, 0.10, 0.80;
  prob.obs_loglik = [r, h1](const Eigen::VectorXd& th) {
    const GjrParams p{th[0], th[1], th[2], th[3]};
    return garch_obs_loglik(r, filter_gjr(r, p, h1));
  };

  FitResult fit = fit_gaussian_ml(prob, opt);
  const GjrParams p{fit.theta[0], fit.theta[1], fit.theta[2], fit.theta[3]};
  const auto h = filter_gjr(r, p, h1);
  fit.path.mu = h;
  fit.path.tau = h;
  fit.path.xi.assign(h.size(), 1.0);
  fit.path.residuals.resize(h.size());
  fit.diag_residuals.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double eta2 = r[i] * r[i] / h[i];
    fit.path.residuals[i] = eta2;
    fit.diag_residuals[i] = eta2;
  }
  for (int lag : {5, 10, 20}) {
    try {
      fit.ljung_box[lag] = ljung_box(fit.diag_residuals, lag);
    } catch (const std::exception& e) {
      fit.notes.push_back("ljung-box lag " + std::to_string(lag) + " skipped: " + e.what());
    }
  }
  fit.context["ret_mean"] = ret_mean;
  fit.context["h1"] = h1;
  return fit;
}

namespace {

FitResult finish_garch_midas_fit(FitResult fit, const PanelSeries& series,
                                 const std::vector<double>& r, const GarchMidasPath& path,
                                 double ret_mean) {
  fit.path.mu = path.h;
  fit.path.tau = path.tau;
  fit.path.xi = path.xi;
  fit.path.residuals.resize(path.h.size());
  fit.diag_residuals.resize(path.h.size());
  for (std::size_t i = 0; i < path.h.size(); ++i) {
    const double eta2 = r[i] * r[i] / path.h[i];
    fit.path.residuals[i] = eta2;
    fit.diag_residuals[i] = eta2;
  }
  for (int lag : {5, 10, 20}) {
    try {
      fit.ljung_box[lag] = ljung_box(fit.diag_residuals, lag);
    } catch (const std::exception& e) {
      fit.notes.push_back("ljung-box lag " + std::to_string(lag) + " skipped: " + e.what());
    }
  }
  fit.context["ret_mean"] = ret_mean;
  (void)series;
  return fit;
}

}  // namespace

FitResult fit_gm(const PanelSeries& series, int K, const BfgsOptions& opt) {
  const auto raw = series.ret();
  const double ret_mean = sample_mean(raw);
  const auto r = demean(raw, ret_mean);
  double r2 = 0.0;
  for (double v : r) r2 += v * v;
  r2 /= static_cast<double>(r.size());

  GaussianMlProblem prob;
  prob.model = "gm";
  prob.param_names = {"alpha1", "gamma1", "beta1", "m", "zeta", "omega2"};
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    const Eigen::Vector3d p = simplex_from_u(u.head(3));
    Eigen::VectorXd th(6);
    th << p[0], 2.0 * p[1], p[2], u[3], u[4], lower_bounded_from_u(u[5], 1.001);
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(6);
    u.head(3) = u_from_simplex(Eigen::Vector3d(th[0], th[1] / 2.0, th[2]));
    u[3] = th[3];
    u[4] = th[4];
    u[5] = u_from_lower_bounded(th[5], 1.001);
    return u;
  };
  prob.theta0 = Eigen::VectorXd(6);
  prob.theta0 << 0.05, 0.10, 0.80, std::log(r2), 0.0, 2.0;
  prob.obs_loglik = [&series, r, K](const Eigen::VectorXd& th) {
    GmParams p;
    p.alpha1 = th[0];
    p.gamma1 = th[1];
    p.beta1 = th[2];
    p.m = th[3];
    p.zeta = th[4];
    p.lag = BetaLag{K, 1.0, th[5]};
    return garch_obs_loglik(r, filter_gm(series, r, p).h);
  };

  FitResult fit = fit_gaussian_ml(prob, opt);
  GmParams p;
  p.alpha1 = fit.theta[0];
  p.gamma1 = fit.theta[1];
  p.beta1 = fit.theta[2];
  p.m = fit.theta[3];
  p.zeta = fit.theta[4];
  p.lag = BetaLag{K, 1.0, fit.theta[5]};
  fit = finish_garch_midas_fit(std::move(fit), series, r, filter_gm(series, r, p), ret_mean);
  fit.context["K"] = static_cast<double>(K);
  return fit;
}

FitResult fit_dagm(const PanelSeries& series, int K, const BfgsOptions& opt) {
  const auto raw = series.ret();
  const double ret_mean = sample_mean(raw);
  const auto r = demean(raw, ret_mean);
  double r2 = 0.0;
  for (double v : r) r2 += v * v;
  r2 /= static_cast<double>(r.size());

  GaussianMlProblem prob;
  prob.model = "dagm";
  prob.param_names = {"alpha1", "gamma1", "beta1", "m",
                      "zeta_plus", "zeta_minus", "omega2_plus", "omega2_minus"};
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    const Eigen::Vector3d p = simplex_from_u(u.head(3));
    Eigen::VectorXd th(8);
    th << p[0], 2.0 * p[1], p[2], u[3], u[4], u[5], lower_bounded_from_u(u[6], 1.001),
        lower_bounded_from_u(u[7], 1.001);
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(8);
    u.head(3) = u_from_simplex(Eigen::Vector3d(th[0], th[1] / 2.0, th[2]));
    u[3] = th[3];
    u[4] = th[4];
    u[5] = th[5];
    u[6] = u_from_lower_bounded(th[6], 1.001);
    u[7] = u_from_lower_bounded(th[7], 1.001);
    return u;
  };
  prob.theta0 = Eigen::VectorXd(8);
  prob.theta0 << 0.05, 0.10, 0.80, std::log(r2), 0.0, 0.0, 2.0, 2.0;
  prob.obs_loglik = [&series, r, K](const Eigen::VectorXd& th) {
    DagmParams p;
    p.alpha1 = th[0];
    p.gamma1 = th[1];
    p.beta1 = th[2];
    p.m = th[3];
    p.zeta_plus = th[4];
    p.zeta_minus = th[5];
    p.lag_plus = BetaLag{K, 1.0, th[6]};
    p.lag_minus = BetaLag{K, 1.0, th[7]};
    return garch_obs_loglik(r, filter_dagm(series, r, p).h);
  };

  FitResult fit = fit_gaussian_ml(prob, opt);
  DagmParams p;
  p.alpha1 = fit.theta[0];
  p.gamma1 = fit.theta[1];
  p.beta1 = fit.theta[2];
  p.m = fit.theta[3];
  p.zeta_plus = fit.theta[4];
  p.zeta_minus = fit.theta[5];
  p.lag_plus = BetaLag{K, 1.0, fit.theta[6]};
  p.lag_minus = BetaLag{K, 1.0, fit.theta[7]};
  fit = finish_garch_midas_fit(std::move(fit), series, r, filter_dagm(series, r, p), ret_mean);
  fit.context["K"] = static_cast<double>(K);
  return fit;
}

FitResult fit_rgarch(const PanelSeries& series, const BfgsOptions& opt) {
  const auto raw = series.ret();
  const auto rvol = series.rvol();
  for (double v : rvol)
    if (!(v > 0.0))
      throw std::domain_error("rgarch needs strictly positive realized volatility");
  const double ret_mean = sample_mean(raw);
  const auto r = demean(raw, ret_mean);
  double h1 = 0.0;
  for (double v : r) h1 += v * v;
  h1 /= static_cast<double>(r.size());

  double mean_logv = 0.0;
  for (double v : rvol) mean_logv += std::log(v);
  mean_logv /= static_cast<double>(rvol.size());
  double var_logv = 0.0;
  for (double v : rvol) var_logv += (std::log(v) - mean_logv) * (std::log(v) - mean_logv);
  var_logv /= static_cast<double>(rvol.size());

  GaussianMlProblem prob;
  prob.model = "rgarch";
  prob.param_names = {"const", "beta1", "alpha1", "xi_m", "phi_m", "tau1", "tau2", "sigma_u2"};
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd th(8);
    th << u[0], unit_from_u(u[1]), u[2], u[3], u[4], u[5], u[6], positive_from_u(u[7]);
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(8);
    u << th[0], u_from_unit(th[1]), th[2], th[3], th[4], th[5], th[6], u_from_positive(th[7]);
    return u;
  };
  const double m_bar = std::log(h1);
  prob.theta0 = Eigen::VectorXd(8);
  prob.theta0 << (1.0 - 0.7) * m_bar - 0.25 * mean_logv, 0.7, 0.25, mean_logv - 0.5 * m_bar, 0.5,
      0.0, 0.0, std::max(0.5 * var_logv, 1e-3);
  prob.obs_loglik = [r, rvol, h1](const Eigen::VectorXd& th) {
    const RgarchParams p{th[0], th[1], th[2], th[3], th[4], th[5], th[6], th[7]};
    return rgarch_obs_loglik(r, rvol, p, h1);
  };

  FitResult fit = fit_gaussian_ml(prob, opt);
  const RgarchParams p{fit.theta[0], fit.theta[1], fit.theta[2], fit.theta[3],
                       fit.theta[4], fit.theta[5], fit.theta[6], fit.theta[7]};
  const auto h = filter_rgarch(r, rvol, p, h1);
  fit.path.mu = h;
  fit.path.tau = h;
  fit.path.xi.assign(h.size(), 1.0);
  fit.path.residuals.resize(h.size());
  fit.diag_residuals.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double eta2 = r[i] * r[i] / h[i];
    fit.path.residuals[i] = eta2;
    fit.diag_residuals[i] = eta2;
  }
  for (int lag : {5, 10, 20}) {
    try {
      fit.ljung_box[lag] = ljung_box(fit.diag_residuals, lag);
    } catch (const std::exception& e) {
      fit.notes.push_back("ljung-box lag " + std::to_string(lag) + " skipped: " + e.what());
    }
  }
  fit.context["ret_mean"] = ret_mean;
  fit.context["h1"] = h1;
  return fit;
}

PanelSeries simulate_gjr(const GjrParams& p, const SimulateOptions& opt) {
  p.validate();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double h1 = p.c / (1.0 - p.alpha1 - p.gamma1 / 2.0 - p.beta1);
  std::vector<double> r(opt.n_days), rvol(opt.n_days);
  double h = h1;
  for (std::size_t i = 0; i < opt.n_days; ++i) {
    if (i > 0) h = gjr_step(p, h, r[i - 1]);
    r[i] = std::sqrt(h) * z(rng);
    rvol[i] = std::abs(r[i]);
  }
  return assemble_return_panel(r, rvol, opt);
}

PanelSeries simulate_gm(const GmParams& p, const SimulateOptions& opt) {
  short_run_of(p.alpha1, p.gamma1, p.beta1).validate();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> z(0.0, 1.0);

  const auto dates = business_days(opt.start, opt.n_days);
  std::map<PeriodId, double> macro;
  {
    const double stat_sd = opt.macro_sd / std::sqrt(1.0 - opt.macro_rho * opt.macro_rho);
    PeriodId first = period_of(dates.front(), opt.frequency);
    PeriodId last = period_of(dates.back(), opt.frequency);
    PeriodId q = first;
    for (int k = 0; k < p.lag.K; ++k) q = prev_period(q, opt.frequency);
    double xval = stat_sd * z(rng);
    while (true) {
      macro[q] = xval;
      if (q == last) break;
      q = next_period(q, opt.frequency);
      xval = opt.macro_rho * xval + opt.macro_sd * z(rng);
    }
  }

  const auto weights = beta_lag_weights(p.lag);
  std::vector<double> r(opt.n_days), rvol(opt.n_days);
  const ShortRunParams s = short_run_of(p.alpha1, p.gamma1, p.beta1);
  PeriodId current{};
  double tau_t = 0.0, tau_prev = 0.0, xi = 1.0;
  for (std::size_t i = 0; i < opt.n_days; ++i) {
    const PeriodId pid = period_of(dates[i], opt.frequency);
    if (i == 0 || !(pid == current)) {
      current = pid;
      std::vector<double> lags(static_cast<std::size_t>(p.lag.K));
      PeriodId q = pid;
      for (int k = 0; k < p.lag.K; ++k) {
        q = prev_period(q, opt.frequency);
        lags[static_cast<std::size_t>(k)] = macro.at(q);
      }
      tau_t = std::exp(p.m + p.zeta * beta_weighted_sum(weights, lags));
    }
    if (i > 0)
      xi = s.intercept() + (s.alpha1 + (r[i - 1] < 0.0 ? s.gamma1 : 0.0)) *
                               (r[i - 1] * r[i - 1] / tau_prev) +
           s.beta1 * xi;
    const double h = tau_t * xi;
    r[i] = std::sqrt(h) * z(rng);
    rvol[i] = std::abs(r[i]);
    tau_prev = tau_t;
  }
  return assemble_return_panel(r, rvol, opt).with_macro(std::move(macro));
}

PanelSeries simulate_rgarch(const RgarchParams& p, double h1, const SimulateOptions& opt) {
  if (!(h1 > 0.0)) throw std::invalid_argument("initial variance must be > 0");
  if (!(p.sigma_u2 > 0.0)) throw std::invalid_argument("sigma_u2 must be > 0");
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> r(opt.n_days), rvol(opt.n_days);
  double logh = std::log(h1);
  for (std::size_t i = 0; i < opt.n_days; ++i) {
    if (i > 0) logh = p.c + p.beta1 * logh + p.alpha1 * std::log(rvol[i - 1]);
    const double h = std::exp(logh);
    const double eta = z(rng);
    const double u = std::sqrt(p.sigma_u2) * z(rng);
    r[i] = std::sqrt(h) * eta;
    rvol[i] = std::exp(p.xi_m + p.phi_m * logh + p.tau1 * eta + p.tau2 * (eta * eta - 1.0) + u);
  }
  return assemble_return_panel(r, rvol, opt);
}

}  // namespace dmem
