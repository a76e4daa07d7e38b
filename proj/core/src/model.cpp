#include "dmem/model.hpp"

#include <cmath>
#include <stdexcept>

#include "dmem/evaluation.hpp"

namespace dmem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// u <-> theta maps for a short-run block (alpha1, gamma1, beta1) living on
// the open region alpha1 + gamma1/2 + beta1 < 1 with nonnegative pieces
Eigen::Vector3d short_from_u3(const Eigen::Vector3d& u) {
  const Eigen::Vector3d p = simplex_from_u(u);
  return {p[0], 2.0 * p[1], p[2]};
}

Eigen::Vector3d u3_from_short(const Eigen::Vector3d& th) {
  return u_from_simplex(Eigen::Vector3d(th[0], th[1] / 2.0, th[2]));
}

std::vector<double> demeaned_returns(const PanelSeries& series, std::size_t begin,
                                     std::size_t end, double ret_mean) {
  std::vector<double> r;
  r.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) r.push_back(series.day(i).ret - ret_mean);
  return r;
}

std::vector<double> tail_vols(const std::vector<double>& h, std::size_t from) {
  std::vector<double> out;
  out.reserve(h.size() - from);
  for (std::size_t i = from; i < h.size(); ++i) out.push_back(variance_to_vol_forecast(h[i]));
  return out;
}

}  // namespace

ModelId parse_model_id(const std::string& text) {
  if (text == "amem") return ModelId::amem;
  if (text == "cmem") return ModelId::cmem;
  if (text == "mem_midas") return ModelId::mem_midas;
  if (text == "ahar") return ModelId::ahar;
  if (text == "gjr") return ModelId::gjr;
  if (text == "gm") return ModelId::gm;
  if (text == "dagm") return ModelId::dagm;
  if (text == "rgarch") return ModelId::rgarch;
  throw std::invalid_argument(
      "unknown model id '" + text +
      "' (expected amem|cmem|mem_midas|ahar|gjr|gm|dagm|rgarch)");
}

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::amem: return "amem";
    case ModelId::cmem: return "cmem";
    case ModelId::mem_midas: return "mem_midas";
    case ModelId::ahar: return "ahar";
    case ModelId::gjr: return "gjr";
    case ModelId::gm: return "gm";
    case ModelId::dagm: return "dagm";
    case ModelId::rgarch: return "rgarch";
  }
  throw std::logic_error("unhandled model id");
}

PathProblem amem_problem(const PanelSeries& window) {
  const double level = mean_of(window.rvol());
  PathProblem prob;
  prob.model = "amem";
  prob.param_names = {"alpha1", "gamma1", "beta1"};
  prob.x = window.rvol();
  prob.theta0 = Eigen::VectorXd(3);
  prob.theta0 << 0.05, 0.10, 0.80;
  prob.theta_from_u = [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return short_from_u3(u);
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) -> Eigen::VectorXd {
    return u3_from_short(th);
  };
  prob.lower = Eigen::Vector3d(0.0, 0.0, 0.0);
  prob.upper = Eigen::Vector3d(1.0, 2.0, 1.0);
  prob.full_path = [window, level](const Eigen::VectorXd& th) {
    return filter_amem(window, ShortRunParams{th[0], th[1], th[2]}, level);
  };
  prob.mu_path = [window, level](const Eigen::VectorXd& th) {
    return filter_amem(window, ShortRunParams{th[0], th[1], th[2]}, level).mu;
  };
  return prob;
}

PathProblem component_problem(const PanelSeries& window) {
  const double xbar = mean_of(window.rvol());
  PathProblem prob;
  prob.model = "cmem";
  prob.param_names = {"alpha1",    "gamma1",     "beta1",      "omega_tau",
                      "alpha1_tau", "gamma1_tau", "beta1_tau"};
  prob.x = window.rvol();
  prob.theta0 = Eigen::VectorXd(7);
  prob.theta0 << 0.05, 0.05, 0.80, 0.1 * xbar, 0.05, 0.02, 0.85;
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd th(7);
    th.head(3) = short_from_u3(u.head(3));
    th[3] = positive_from_u(u[3]);
    th.tail(3) = short_from_u3(u.tail(3));
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(7);
    u.head(3) = u3_from_short(th.head(3));
    u[3] = u_from_positive(th[3]);
    u.tail(3) = u3_from_short(th.tail(3));
    return u;
  };
  prob.lower = Eigen::VectorXd::Zero(7);
  prob.upper = (Eigen::VectorXd(7) << 1.0, 2.0, 1.0, kInf, 1.0, 2.0, 1.0).finished();
  auto path_of = [window, xbar](const Eigen::VectorXd& th) {
    const ShortRunParams s{th[0], th[1], th[2]};
    LongRunComponentParams l;
    l.omega_tau = th[3];
    l.alpha1_tau = th[4];
    l.gamma1_tau = th[5];
    l.beta1_tau = th[6];
    return filter_component(window, s, l, nullptr, xbar);
  };
  prob.full_path = path_of;
  prob.mu_path = [path_of](const Eigen::VectorXd& th) { return path_of(th).mu; };
  return prob;
}

PathProblem mem_midas_problem(const PanelSeries& window, int K) {
  if (!window.has_macro()) throw std::invalid_argument("mem_midas needs an attached macro series");
  const double xbar = mean_of(window.rvol());
  PathProblem prob;
  prob.model = "mem_midas";
  prob.param_names = {"alpha1", "gamma1", "beta1", "m", "zeta", "omega2"};
  prob.x = window.rvol();
  prob.theta0 = Eigen::VectorXd(6);
  prob.theta0 << 0.05, 0.05, 0.80, std::log(xbar), 0.0, 2.0;
  prob.theta_from_u = [](const Eigen::VectorXd& u) {
    Eigen::VectorXd th(6);
    th.head(3) = short_from_u3(u.head(3));
    th[3] = u[3];
    th[4] = u[4];
    th[5] = lower_bounded_from_u(u[5], 1.001);
    return th;
  };
  prob.u_from_theta = [](const Eigen::VectorXd& th) {
    Eigen::VectorXd u(6);
    u.head(3) = u3_from_short(th.head(3));
    u[3] = th[3];
    u[4] = th[4];
    u[5] = u_from_lower_bounded(th[5], 1.001);
    return u;
  };
  prob.lower = (Eigen::VectorXd(6) << 0.0, 0.0, 0.0, -kInf, -kInf, 1.001).finished();
  prob.upper = (Eigen::VectorXd(6) << 1.0, 2.0, 1.0, kInf, kInf, kInf).finished();
  auto path_of = [window, K](const Eigen::VectorXd& th) {
    const ShortRunParams s{th[0], th[1], th[2]};
    MidasLongRunParams l;
    l.m = th[3];
    l.zeta = th[4];
    l.lag = BetaLag{K, 1.0, th[5]};
    return filter_mem_midas(window, s, l);
  };
  prob.full_path = path_of;
  prob.mu_path = [path_of](const Eigen::VectorXd& th) { return path_of(th).mu; };
  return prob;
}

FitResult ahar_fit_result(const PanelSeries& window) {
  const AharFit a = fit_ahar_ols(window);
  FitResult fit;
  fit.model = "ahar";
  fit.estimator = "ols";
  fit.param_names = {"const", "beta1", "gamma1", "beta5", "beta22"};
  fit.theta = a.beta;
  fit.se_opg = a.se_robust;
  fit.se_hessian = a.se_robust;
  fit.se_sandwich = a.se_robust;
  fit.sigma2 = a.sigma_u2;
  fit.converged = true;
  const std::size_t rows = a.fitted.size();
  double ssr = 0.0;
  for (double u : a.std_residuals) ssr += u * u;
  ssr *= a.sigma_u2;
  fit.loglik = -0.5 * static_cast<double>(rows) *
                   (std::log(2.0 * 3.141592653589793) + std::log(a.sigma_u2)) -
               0.5 * ssr / a.sigma_u2;
  fit.criterion = ssr;
  const std::size_t n = window.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  fit.path.mu.assign(n, nan);
  fit.path.tau.assign(n, nan);
  fit.path.xi.assign(n, nan);
  fit.path.residuals.assign(n, nan);
  const auto x = window.rvol();
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t d = kAharLagDays + i;
    fit.path.mu[d] = a.fitted[i];
    fit.path.tau[d] = a.fitted[i];
    fit.path.xi[d] = 1.0;
    fit.path.residuals[d] = x[d] - a.fitted[i];
  }
  fit.diag_residuals = a.std_residuals;
  for (int lag : {5, 10, 20}) {
    try {
      fit.ljung_box[lag] = ljung_box(fit.diag_residuals, lag);
    } catch (const std::exception& e) {
      fit.notes.push_back("ljung-box lag " + std::to_string(lag) + " skipped: " + e.what());
    }
  }
  return fit;
}

namespace {

class AmemModel final : public Model {
 public:
  explicit AmemModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "amem"; }
  FitResult fit(const PanelSeries& window) const override {
    const PathProblem prob = amem_problem(window);
    MemFitOptions o;
    o.estimator = settings_.estimator;
    o.dist = settings_.dist;
    o.v_estimator = settings_.v_estimator;
    o.bfgs = settings_.bfgs;
    FitResult f = fit_mem(prob, o);
    f.context["level"] = mean_of(window.rvol());
    return f;
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const PanelSeries sub = series.slice(w_begin, fc_end);
    const ShortRunParams s{fit.theta[0], fit.theta[1], fit.theta[2]};
    const MeanPath p = filter_amem(sub, s, fit.context.at("level"));
    return {p.mu.begin() + static_cast<std::ptrdiff_t>(fc_begin - w_begin), p.mu.end()};
  }

 private:
  ModelSettings settings_;
};

class CmemModel final : public Model {
 public:
  explicit CmemModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "cmem"; }
  FitResult fit(const PanelSeries& window) const override {
    const PathProblem prob = component_problem(window);
    MemFitOptions o;
    o.estimator = settings_.estimator;
    o.dist = settings_.dist;
    o.v_estimator = settings_.v_estimator;
    o.bfgs = settings_.bfgs;
    FitResult f = fit_mem(prob, o);
    f.context["tau1"] = mean_of(window.rvol());
    return f;
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const PanelSeries sub = series.slice(w_begin, fc_end);
    const ShortRunParams s{fit.theta[0], fit.theta[1], fit.theta[2]};
    LongRunComponentParams l;
    l.omega_tau = fit.theta[3];
    l.alpha1_tau = fit.theta[4];
    l.gamma1_tau = fit.theta[5];
    l.beta1_tau = fit.theta[6];
    const MeanPath p = filter_component(sub, s, l, nullptr, fit.context.at("tau1"));
    return {p.mu.begin() + static_cast<std::ptrdiff_t>(fc_begin - w_begin), p.mu.end()};
  }

 private:
  ModelSettings settings_;
};

class MemMidasModel final : public Model {
 public:
  explicit MemMidasModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "mem_midas"; }
  FitResult fit(const PanelSeries& window) const override {
    const PathProblem prob = mem_midas_problem(window, settings_.K);
    MemFitOptions o;
    o.estimator = settings_.estimator;
    o.dist = settings_.dist;
    o.v_estimator = settings_.v_estimator;
    o.bfgs = settings_.bfgs;
    FitResult f = fit_mem(prob, o);
    f.context["K"] = static_cast<double>(settings_.K);
    return f;
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const PanelSeries sub = series.slice(w_begin, fc_end);
    const ShortRunParams s{fit.theta[0], fit.theta[1], fit.theta[2]};
    MidasLongRunParams l;
    l.m = fit.theta[3];
    l.zeta = fit.theta[4];
    l.lag = BetaLag{settings_.K, 1.0, fit.theta[5]};
    const MeanPath p = filter_mem_midas(sub, s, l);
    return {p.mu.begin() + static_cast<std::ptrdiff_t>(fc_begin - w_begin), p.mu.end()};
  }

 private:
  ModelSettings settings_;
};

class AharModel final : public Model {
 public:
  explicit AharModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "ahar"; }
  FitResult fit(const PanelSeries& window) const override { return ahar_fit_result(window); }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    (void)w_begin;  // regression rows need only the 22-day lag buffer
    return ahar_forecast(series, fit.theta, fc_begin, fc_end);
  }

 private:
  ModelSettings settings_;
};

class GjrModel final : public Model {
 public:
  explicit GjrModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "gjr"; }
  FitResult fit(const PanelSeries& window) const override {
    return fit_gjr(window, settings_.bfgs);
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const auto r = demeaned_returns(series, w_begin, fc_end, fit.context.at("ret_mean"));
    const GjrParams p{fit.theta[0], fit.theta[1], fit.theta[2], fit.theta[3]};
    const auto h = filter_gjr(r, p, fit.context.at("h1"));
    return tail_vols(h, fc_begin - w_begin);
  }

 private:
  ModelSettings settings_;
};

class GmModel final : public Model {
 public:
  explicit GmModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "gm"; }
  FitResult fit(const PanelSeries& window) const override {
    return fit_gm(window, settings_.K, settings_.bfgs);
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const PanelSeries sub = series.slice(w_begin, fc_end);
    const auto r = demeaned_returns(series, w_begin, fc_end, fit.context.at("ret_mean"));
    GmParams p;
    p.alpha1 = fit.theta[0];
    p.gamma1 = fit.theta[1];
    p.beta1 = fit.theta[2];
    p.m = fit.theta[3];
    p.zeta = fit.theta[4];
    p.lag = BetaLag{settings_.K, 1.0, fit.theta[5]};
    const auto path = filter_gm(sub, r, p);
    return tail_vols(path.h, fc_begin - w_begin);
  }

 private:
  ModelSettings settings_;
};

class DagmModel final : public Model {
 public:
  explicit DagmModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "dagm"; }
  FitResult fit(const PanelSeries& window) const override {
    return fit_dagm(window, settings_.K, settings_.bfgs);
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const PanelSeries sub = series.slice(w_begin, fc_end);
    const auto r = demeaned_returns(series, w_begin, fc_end, fit.context.at("ret_mean"));
    DagmParams p;
    p.alpha1 = fit.theta[0];
    p.gamma1 = fit.theta[1];
    p.beta1 = fit.theta[2];
    p.m = fit.theta[3];
    p.zeta_plus = fit.theta[4];
    p.zeta_minus = fit.theta[5];
    p.lag_plus = BetaLag{settings_.K, 1.0, fit.theta[6]};
    p.lag_minus = BetaLag{settings_.K, 1.0, fit.theta[7]};
    const auto path = filter_dagm(sub, r, p);
    return tail_vols(path.h, fc_begin - w_begin);
  }

 private:
  ModelSettings settings_;
};

class RgarchModel final : public Model {
 public:
  explicit RgarchModel(ModelSettings s) : settings_(std::move(s)) {}
  std::string name() const override { return "rgarch"; }
  FitResult fit(const PanelSeries& window) const override {
    return fit_rgarch(window, settings_.bfgs);
  }
  std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                               std::size_t w_begin, std::size_t fc_begin,
                               std::size_t fc_end) const override {
    const auto r = demeaned_returns(series, w_begin, fc_end, fit.context.at("ret_mean"));
    std::vector<double> rv;
    rv.reserve(fc_end - w_begin);
    for (std::size_t i = w_begin; i < fc_end; ++i) rv.push_back(series.day(i).rvol);
    const RgarchParams p{fit.theta[0], fit.theta[1], fit.theta[2], fit.theta[3],
                         fit.theta[4], fit.theta[5], fit.theta[6], fit.theta[7]};
    const auto h = filter_rgarch(r, rv, p, fit.context.at("h1"));
    return tail_vols(h, fc_begin - w_begin);
  }

 private:
  ModelSettings settings_;
};

}  // namespace

std::unique_ptr<Model> make_model(const ModelSettings& settings) {
  switch (settings.id) {
    case ModelId::amem: return std::make_unique<AmemModel>(settings);
    case ModelId::cmem: return std::make_unique<CmemModel>(settings);
    case ModelId::mem_midas: return std::make_unique<MemMidasModel>(settings);
    case ModelId::ahar: return std::make_unique<AharModel>(settings);
    case ModelId::gjr: return std::make_unique<GjrModel>(settings);
    case ModelId::gm: return std::make_unique<GmModel>(settings);
    case ModelId::dagm: return std::make_unique<DagmModel>(settings);
    case ModelId::rgarch: return std::make_unique<RgarchModel>(settings);
  }
  throw std::logic_error("unhandled model id");
}

}  // namespace dmem
