#include "dmem/mem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dmem {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> draw_errors(std::mt19937_64& rng, ErrorDist dist, double shape,
                                std::size_t n) {
  std::vector<double> eps(n);
  if (dist == ErrorDist::gamma) {
    require(shape > 0.0, "gamma shape must be > 0");
    std::gamma_distribution<double> g(shape, 1.0 / shape);
    for (auto& e : eps) e = g(rng);
  } else {
    require(shape >= 0.0, "lognormal V must be >= 0");
    std::normal_distribution<double> z(0.0, 1.0);
    const double s = std::sqrt(shape);
    for (auto& e : eps) e = std::exp(-shape / 2.0 + s * z(rng));
  }
  return eps;
}

std::vector<double> draw_signs(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> r(n);
  for (auto& v : r) v = coin(rng) ? -1.0 : 1.0;
  return r;
}

PanelSeries assemble_panel(const std::vector<double>& x, const std::vector<double>& r,
                           const SimulateOptions& opt) {
  const auto dates = business_days(opt.start, x.size());
  std::vector<DayObs> days(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) days[i] = {dates[i], r[i], x[i]};
  return PanelSeries::from_days(std::move(days), opt.frequency);
}

}  // namespace

void ShortRunParams::validate() const {
  require(alpha1 >= 0.0, "alpha1 must be >= 0");
  require(gamma1 >= 0.0, "gamma1 must be >= 0");
  require(beta1 >= 0.0, "beta1 must be >= 0");
  require(persistence() < 1.0, "alpha1 + gamma1/2 + beta1 must be < 1");
}

void LongRunComponentParams::validate() const {
  require(omega_tau > 0.0, "omega_tau must be > 0");
  require(alpha1_tau >= 0.0, "alpha1_tau must be >= 0");
  require(gamma1_tau >= 0.0, "gamma1_tau must be >= 0");
  require(beta1_tau >= 0.0, "beta1_tau must be >= 0");
  require(persistence() < 1.0, "alpha1_tau + gamma1_tau/2 + beta1_tau must be < 1");
}

void MeanPath::finalize(const std::vector<double>& x) {
  mu.resize(tau.size());
  residuals.resize(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    mu[i] = tau[i] * xi[i];
    residuals[i] = x[i] / mu[i];
  }
}

std::vector<double> xi_recursion(const ShortRunParams& p, const std::vector<double>& driver,
                                 const std::vector<unsigned char>& lagged_neg,
                                 const std::vector<double>* z) {
  p.validate();
  const std::size_t n = driver.size();
  std::vector<double> xi(n);
  if (n == 0) return xi;
  const double c = p.intercept();
  xi[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    xi[i] = c + (p.alpha1 + p.gamma1 * lagged_neg[i]) * driver[i - 1] + p.beta1 * xi[i - 1];
    if (z) xi[i] += p.delta1 * (*z)[i - 1];
  }
  return xi;
}

double amem_step(const ShortRunParams& p, double level, double mu_prev, double x_prev,
                 bool neg_prev) {
  return p.intercept() * level + (p.alpha1 + (neg_prev ? p.gamma1 : 0.0)) * x_prev +
         p.beta1 * mu_prev;
}

ComponentStep component_step(const ShortRunParams& s, const LongRunComponentParams& l,
                             double x_prev, bool neg_prev, double xi_prev, double tau_prev) {
  ComponentStep out;
  out.xi = s.intercept() + (s.alpha1 + (neg_prev ? s.gamma1 : 0.0)) * (x_prev / tau_prev) +
           s.beta1 * xi_prev;
  out.tau = l.omega_tau + (l.alpha1_tau + (neg_prev ? l.gamma1_tau : 0.0)) * (x_prev / xi_prev) +
            l.beta1_tau * tau_prev;
  out.mu = out.xi * out.tau;
  return out;
}

double midas_xi_step(const ShortRunParams& p, double x_prev, double tau_prev_day, bool neg_prev,
                     double xi_prev, double z, bool has_z) {
  double xi = p.intercept() + (p.alpha1 + (neg_prev ? p.gamma1 : 0.0)) * (x_prev / tau_prev_day) +
              p.beta1 * xi_prev;
  if (has_z) xi += p.delta1 * z;
  return xi;
}

MeanPath filter_amem(const PanelSeries& series, const ShortRunParams& p, double level,
                     const std::vector<double>* z) {
  p.validate();
  require(level > 0.0, "amem level must be > 0");
  const auto x = series.rvol();
  const auto neg = series.lagged_negative();
  const std::size_t n = x.size();
  MeanPath path;
  path.mu.resize(n);
  path.tau.assign(n, level);
  path.xi.resize(n);
  path.residuals.resize(n);
  path.mu[0] = level;
  for (std::size_t i = 1; i < n; ++i) {
    path.mu[i] = amem_step(p, level, path.mu[i - 1], x[i - 1], neg[i] != 0);
    if (z) path.mu[i] += p.delta1 * (*z)[i - 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    path.xi[i] = path.mu[i] / level;
    path.residuals[i] = x[i] / path.mu[i];
  }
  return path;
}

MeanPath filter_component(const PanelSeries& series, const ShortRunParams& s,
                          const LongRunComponentParams& l, const std::vector<double>* z,
                          std::optional<double> tau1) {
  s.validate();
  l.validate();
  const auto x = series.rvol();
  const auto neg = series.lagged_negative();
  const std::size_t n = x.size();
  MeanPath path;
  path.tau.resize(n);
  path.xi.resize(n);
  path.xi[0] = 1.0;
  path.tau[0] = tau1.value_or(mean(x));
  for (std::size_t i = 1; i < n; ++i) {
    const ComponentStep st =
        component_step(s, l, x[i - 1], neg[i] != 0, path.xi[i - 1], path.tau[i - 1]);
    path.xi[i] = z ? st.xi + s.delta1 * (*z)[i - 1] : st.xi;
    path.tau[i] = st.tau;
    if (path.tau[i] <= 0.0) throw std::runtime_error("component filter produced tau <= 0");
  }
  path.finalize(x);
  return path;
}

MeanPath filter_mem_midas(const PanelSeries& series, const ShortRunParams& s,
                          const MidasLongRunParams& l, const std::vector<double>* z) {
  s.validate();
  const auto weights = beta_lag_weights(l.lag);
  const auto x = series.rvol();
  const auto neg = series.lagged_negative();
  const std::size_t n = x.size();
  MeanPath path;
  path.tau.resize(n);
  path.xi.resize(n);

  PeriodId current{};
  double tau_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PeriodId p = series.period(i);
    if (i == 0 || !(p == current)) {
      current = p;
      const auto lags = series.macro_lags(p, l.lag.K);
      tau_t = std::exp(l.m + l.zeta * beta_weighted_sum(weights, lags));
    }
    path.tau[i] = tau_t;
  }

  path.xi[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i)
    path.xi[i] = midas_xi_step(s, x[i - 1], path.tau[i - 1], neg[i] != 0, path.xi[i - 1],
                               z ? (*z)[i - 1] : 0.0, z != nullptr);
  path.finalize(x);
  return path;
}

double xi_second_moment(const ShortRunParams& p, double sigma2) {
  p.validate();
  require(sigma2 >= 0.0, "sigma2 must be >= 0");
  const double bstar = p.persistence();
  const double ag = p.alpha1 + p.gamma1 / 2.0;  // = bstar - beta1
  const double denom =
      1.0 - ((sigma2 + 1.0) * (ag * ag + p.gamma1 * p.gamma1 / 4.0) +
             p.beta1 * (2.0 * bstar - p.beta1));
  if (denom <= 0.0) throw std::domain_error("second moment does not exist");
  return (1.0 - bstar * bstar) / denom;
}

ComponentStationarity component_stationarity(const ShortRunParams& s,
                                             const LongRunComponentParams& l, double mu,
                                             double sigma2) {
  s.validate();
  l.validate();
  require(mu > 0.0, "unconditional mean must be > 0");
  const double pp = s.persistence() * l.persistence();
  if (pp >= 1.0) throw std::domain_error("persistence product must be < 1");
  const double bracket =
      (sigma2 * (s.alpha1 + s.gamma1 / 2.0) * (l.alpha1_tau + l.gamma1_tau / 2.0) +
       (sigma2 + 1.0) * s.gamma1 * l.gamma1_tau / 4.0) /
      (1.0 - pp);
  ComponentStationarity out;
  out.e_tau = mu * (1.0 - bracket);
  out.omega_tau_implied = mu * (1.0 - l.persistence()) * (1.0 - bracket);
  return out;
}

ErrorDist parse_error_dist(const std::string& text) {
  if (text == "gamma") return ErrorDist::gamma;
  if (text == "lognormal") return ErrorDist::lognormal;
  throw std::invalid_argument("unknown error distribution '" + text + "'");
}

std::string to_string(ErrorDist d) { return d == ErrorDist::gamma ? "gamma" : "lognormal"; }

PanelSeries simulate_amem(const ShortRunParams& p, double level, const SimulateOptions& opt) {
  p.validate();
  require(level > 0.0, "amem level must be > 0");
  std::mt19937_64 rng(opt.seed);
  const auto eps = draw_errors(rng, opt.dist, opt.shape, opt.n_days);
  const auto r = draw_signs(rng, opt.n_days);
  std::vector<double> x(opt.n_days);
  double mu = level;
  x[0] = mu * eps[0];
  for (std::size_t i = 1; i < opt.n_days; ++i) {
    mu = amem_step(p, level, mu, x[i - 1], r[i - 1] < 0.0);
    x[i] = mu * eps[i];
  }
  return assemble_panel(x, r, opt);
}

PanelSeries simulate_component(const ShortRunParams& s, const LongRunComponentParams& l,
                               const SimulateOptions& opt) {
  s.validate();
  l.validate();
  std::mt19937_64 rng(opt.seed);
  const auto eps = draw_errors(rng, opt.dist, opt.shape, opt.n_days);
  const auto r = draw_signs(rng, opt.n_days);
  std::vector<double> x(opt.n_days);
  double xi = 1.0;
  double tau = l.omega_tau / (1.0 - l.persistence());
  x[0] = tau * xi * eps[0];
  for (std::size_t i = 1; i < opt.n_days; ++i) {
    const ComponentStep st = component_step(s, l, x[i - 1], r[i - 1] < 0.0, xi, tau);
    xi = st.xi;
    tau = st.tau;
    x[i] = st.mu * eps[i];
  }
  return assemble_panel(x, r, opt);
}

PanelSeries simulate_mem_midas(const ShortRunParams& s, const MidasLongRunParams& l,
                               const SimulateOptions& opt) {
  s.validate();
  require(std::abs(opt.macro_rho) < 1.0, "macro AR(1) coefficient must be inside (-1, 1)");
  std::mt19937_64 rng(opt.seed);

  // periods covering the simulated days plus K lags of macro history
  const auto dates = business_days(opt.start, opt.n_days);
  std::vector<PeriodId> period_seq;
  for (const auto& d : dates) {
    const PeriodId p = period_of(d, opt.frequency);
    if (period_seq.empty() || !(period_seq.back() == p)) period_seq.push_back(p);
  }
  std::map<PeriodId, double> macro;
  {
    std::normal_distribution<double> z(0.0, 1.0);
    const double stat_sd = opt.macro_sd / std::sqrt(1.0 - opt.macro_rho * opt.macro_rho);
    double xval = stat_sd * z(rng);
    PeriodId p = period_seq.front();
    for (int k = 0; k < l.lag.K; ++k) p = prev_period(p, opt.frequency);
    while (true) {
      macro[p] = xval;
      if (p == period_seq.back()) break;
      p = next_period(p, opt.frequency);
      xval = opt.macro_rho * xval + opt.macro_sd * z(rng);
    }
  }

  const auto weights = beta_lag_weights(l.lag);
  const auto eps = draw_errors(rng, opt.dist, opt.shape, opt.n_days);
  const auto r = draw_signs(rng, opt.n_days);

  std::vector<double> x(opt.n_days);
  std::vector<double> tau_day(opt.n_days);
  PeriodId current{};
  double tau_t = 0.0;
  for (std::size_t i = 0; i < opt.n_days; ++i) {
    const PeriodId p = period_of(dates[i], opt.frequency);
    if (i == 0 || !(p == current)) {
      current = p;
      std::vector<double> lags(l.lag.K);
      PeriodId q = p;
      for (int k = 0; k < l.lag.K; ++k) {
        q = prev_period(q, opt.frequency);
        lags[k] = macro.at(q);
      }
      tau_t = std::exp(l.m + l.zeta * beta_weighted_sum(weights, lags));
    }
    tau_day[i] = tau_t;
  }

  double xi = 1.0;
  x[0] = tau_day[0] * xi * eps[0];
  for (std::size_t i = 1; i < opt.n_days; ++i) {
    xi = midas_xi_step(s, x[i - 1], tau_day[i - 1], r[i - 1] < 0.0, xi);
    x[i] = tau_day[i] * xi * eps[i];
  }
  return assemble_panel(x, r, opt).with_macro(std::move(macro));
}

}  // namespace dmem
