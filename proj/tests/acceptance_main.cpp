// acceptance gate: statistical and protocol checks that go beyond the unit
// suites. Each criterion prints one PASS/FAIL line with its pinned tolerances;
// the exit code is nonzero if any binding criterion (1-8) fails. Criterion 9
// needs the original data vintage and is reported as SKIPPED.
//
//   dmem_acceptance [--criterion N]...   (default: run all)
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmem/backtest.hpp"
#include "dmem/calendar.hpp"
#include "dmem/evaluation.hpp"
#include "dmem/inference.hpp"
#include "dmem/mem.hpp"
#include "dmem/midas.hpp"
#include "dmem/model.hpp"
#include "dmem/panel.hpp"

#include "support/oracles.hpp"

using namespace dmem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

// the three nested MEM designs used by the recovery and equivalence criteria
struct McDesign {
  std::string name;
  Eigen::VectorXd truth;
  std::function<PanelSeries(std::size_t, std::uint64_t)> simulate;  // (n_days, seed)
  std::function<PathProblem(const PanelSeries&)> problem;
};

std::vector<McDesign> mc_designs() {
  std::vector<McDesign> out;

  McDesign amem;
  amem.name = "amem";
  amem.truth = (Eigen::VectorXd(3) << 0.10, 0.12, 0.75).finished();
  amem.simulate = [](std::size_t n, std::uint64_t seed) {
    SimulateOptions o;
    o.n_days = n;
    o.shape = 5.0;
    o.seed = seed;
    return simulate_amem(ShortRunParams{0.10, 0.12, 0.75}, 10.0, o);
  };
  amem.problem = [](const PanelSeries& p) { return amem_problem(p); };
  out.push_back(std::move(amem));

  McDesign cmem;
  cmem.name = "cmem";
  cmem.truth = (Eigen::VectorXd(7) << 0.06, 0.10, 0.70, 0.4, 0.05, 0.02, 0.90).finished();
  cmem.simulate = [](std::size_t n, std::uint64_t seed) {
    SimulateOptions o;
    o.n_days = n;
    o.shape = 5.0;
    o.seed = seed;
    LongRunComponentParams l;
    l.omega_tau = 0.4;
    l.alpha1_tau = 0.05;
    l.gamma1_tau = 0.02;
    l.beta1_tau = 0.90;
    return simulate_component(ShortRunParams{0.06, 0.10, 0.70}, l, o);
  };
  cmem.problem = [](const PanelSeries& p) { return component_problem(p); };
  out.push_back(std::move(cmem));

  McDesign midas;
  midas.name = "mem_midas";
  midas.truth = (Eigen::VectorXd(6) << 0.08, 0.10, 0.75, 2.0, 0.3, 3.0).finished();
  midas.simulate = [](std::size_t n, std::uint64_t seed) {
    SimulateOptions o;
    o.n_days = n;
    o.shape = 5.0;
    o.seed = seed;
    o.macro_rho = 0.9;
    o.macro_sd = 1.0;
    MidasLongRunParams l;
    l.m = 2.0;
    l.zeta = 0.3;
    l.lag = BetaLag{12, 1.0, 3.0};
    return simulate_mem_midas(ShortRunParams{0.08, 0.10, 0.75}, l, o);
  };
  midas.problem = [](const PanelSeries& p) { return mem_midas_problem(p, 12); };
  out.push_back(std::move(midas));

  return out;
}

// --- criterion 1: parameter recovery and sandwich-CI coverage ------------

Outcome criterion1() {
  constexpr int kReps = 200;
  constexpr std::size_t kDays = 30000;
  constexpr double kBiasTol = 0.02;
  constexpr double kCoverLo = 0.90, kCoverHi = 0.99;
  constexpr double kZ95 = 1.959963984540054;

  Outcome res;
  res.pass = true;
  std::ostringstream detail;
  std::uint64_t seed_base = 11000;
  for (const McDesign& d : mc_designs()) {
    const int p = static_cast<int>(d.truth.size());
    Eigen::VectorXd bias = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd covered = Eigen::VectorXd::Zero(p);
    int ok = 0, failed = 0, nonconverged = 0;
    for (int rep = 0; rep < kReps; ++rep) {
      try {
        const PanelSeries panel = d.simulate(kDays, seed_base + static_cast<std::uint64_t>(rep));
        MemFitOptions o;
        o.estimator = MemEstimator::ml;
        o.dist = ErrorDist::gamma;
        const FitResult fit = fit_mem(d.problem(panel), o);
        if (!fit.converged) ++nonconverged;
        bias += fit.theta - d.truth;
        for (int k = 0; k < p; ++k)
          if (std::abs(fit.theta[k] - d.truth[k]) <= kZ95 * fit.se_sandwich[k]) covered[k] += 1.0;
        ++ok;
      } catch (const std::exception& e) {
        ++failed;
        if (failed == 1) detail << d.name << " rep " << rep << " threw: " << e.what() << "; ";
      }
    }
    bias /= static_cast<double>(std::max(ok, 1));
    covered /= static_cast<double>(std::max(ok, 1));
    const double max_bias = bias.cwiseAbs().maxCoeff();
    const double cov_lo = covered.minCoeff();
    const double cov_hi = covered.maxCoeff();
    if (failed > 0 || max_bias >= kBiasTol || cov_lo < kCoverLo || cov_hi > kCoverHi)
      res.pass = false;
    detail << d.name << ": max|bias| " << fmt(max_bias) << ", coverage [" << fmt(cov_lo) << ", "
           << fmt(cov_hi) << "]";
    if (nonconverged > 0) detail << ", " << nonconverged << " reps not converged";
    if (failed > 0) detail << ", " << failed << " reps threw";
    detail << "; ";
  }
  detail << "tol |bias| < " << kBiasTol << ", coverage in [" << kCoverLo << ", " << kCoverHi
         << "], " << kReps << " reps at N = " << kDays;
  res.detail = detail.str();
  return res;
}

// --- criterion 2: GMM solves the same first-order condition as Gamma ML --

Outcome criterion2() {
  constexpr double kTol = 1e-4;
  constexpr std::size_t kDays = 4000;

  Outcome res;
  res.pass = true;
  std::ostringstream detail;
  // the agreement claim is conditional on the ML solution being interior, so
  // each fixture uses a draw where that premise holds (some component-model
  // draws at this length push alpha1 to the zero boundary)
  const std::map<std::string, std::uint64_t> fixture_seed{
      {"amem", 977}, {"cmem", 980}, {"mem_midas", 979}};
  for (const McDesign& d : mc_designs()) {
    const PanelSeries panel = d.simulate(kDays, fixture_seed.at(d.name));
    MemFitOptions o;
    o.dist = ErrorDist::gamma;
    o.estimator = MemEstimator::ml;
    const FitResult ml = fit_mem(d.problem(panel), o);
    o.estimator = MemEstimator::gmm;
    const FitResult gm = fit_mem(d.problem(panel), o);
    if (!ml.converged || !gm.converged || ml.boundary || gm.boundary) {
      res.pass = false;
      detail << d.name << ": fixture not an interior solution; ";
      continue;
    }
    double worst = 0.0;
    for (Eigen::Index k = 0; k < ml.theta.size(); ++k)
      worst = std::max(worst,
                       std::abs(gm.theta[k] - ml.theta[k]) / std::max(1.0, std::abs(ml.theta[k])));
    if (worst > kTol) res.pass = false;
    detail << d.name << ": max rel gap " << fmt(worst) << "; ";
  }
  detail << "tol " << kTol << " relative";
  res.detail = detail.str();
  return res;
}

// --- criterion 3: assembled score vs finite differences ------------------

Eigen::VectorXd sample_theta(const std::string& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto short_block = [&] {
    while (true) {
      const double a = 0.02 + 0.18 * u(rng);
      const double g = 0.02 + 0.28 * u(rng);
      const double b = 0.30 + 0.50 * u(rng);
      if (a + g / 2.0 + b <= 0.92) return Eigen::Vector3d(a, g, b);
    }
  };
  if (model == "amem") return short_block();
  if (model == "cmem") {
    Eigen::VectorXd th(7);
    th.head(3) = short_block();
    th[3] = 0.1 + 0.9 * u(rng);
    while (true) {
      const double a = 0.02 + 0.13 * u(rng);
      const double g = 0.01 + 0.09 * u(rng);
      const double b = 0.40 + 0.50 * u(rng);
      if (a + g / 2.0 + b <= 0.95) {
        th[4] = a;
        th[5] = g;
        th[6] = b;
        break;
      }
    }
    return th;
  }
  Eigen::VectorXd th(6);
  th.head(3) = short_block();
  th[3] = 0.5 + 2.0 * u(rng);
  th[4] = -0.4 + 0.8 * u(rng);
  th[5] = 1.5 + 6.5 * u(rng);
  return th;
}

Outcome criterion3() {
  constexpr double kTol = 1e-5;
  constexpr int kPoints = 20;
  constexpr std::size_t kDays = 500;

  Outcome res;
  res.pass = true;
  std::ostringstream detail;
  std::mt19937_64 rng(2026);
  std::uint64_t seed = 31;
  for (const McDesign& d : mc_designs()) {
    const PanelSeries panel = d.simulate(kDays, seed++);
    const PathProblem prob = d.problem(panel);
    const double n = static_cast<double>(prob.x.size());
    double worst = 0.0;
    for (const auto& [dist, shape] :
         std::vector<std::pair<ErrorDist, double>>{{ErrorDist::gamma, 4.0},
                                                   {ErrorDist::lognormal, 0.45}}) {
      for (int pt = 0; pt < kPoints; ++pt) {
        const Eigen::VectorXd th = sample_theta(d.name, rng);
        const std::vector<double> mu = prob.mu_path(th);
        Eigen::VectorXd eps(static_cast<Eigen::Index>(prob.x.size()));
        for (std::size_t i = 0; i < prob.x.size(); ++i)
          eps[static_cast<Eigen::Index>(i)] = prob.x[i] / mu[i];
        const GradientA ga = gradient_a(prob.mu_path, th, prob.lower, prob.upper);
        const Eigen::VectorXd score = assembled_score(dist, eps, ga.a, shape);
        for (Eigen::Index k = 0; k < th.size(); ++k) {
          auto mean_ll = [&](double t) {
            Eigen::VectorXd th2 = th;
            th2[k] = t;
            const std::vector<double> mu2 = prob.mu_path(th2);
            const double ll = dist == ErrorDist::gamma ? loglik_gamma(prob.x, mu2, shape)
                                                       : loglik_lognormal(prob.x, mu2, shape);
            return ll / n;
          };
          const double h = 1e-3 * std::max(1.0, std::abs(th[k]));
          const double fd = oracle::deriv(mean_ll, th[k], h);
          worst = std::max(worst,
                           std::abs(score[k] - fd) / std::max(1.0, std::abs(fd)));
        }
      }
    }
    if (worst > kTol) res.pass = false;
    detail << d.name << ": max rel gap " << fmt(worst) << "; ";
  }
  detail << "tol " << kTol << " relative, " << kPoints
         << " random feasible points per model and error law";
  res.detail = detail.str();
  return res;
}

// --- criterion 4: variance-formula identities -----------------------------

double rel_gap(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      worst = std::max(worst, std::abs(x(i, j) - y(i, j)) /
                                  std::max({1.0, std::abs(x(i, j)), std::abs(y(i, j))}));
  return worst;
}

Outcome criterion4() {
  constexpr double kTol = 1e-10;
  constexpr int kCases = 25;

  Outcome res;
  res.pass = true;
  std::mt19937_64 rng(44);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_int_distribution<int> pdist(1, 4);
  std::uniform_real_distribution<double> vdist(0.2, 1.0);

  double worst_gamma = 0.0;
  for (int c = 0; c < kCases; ++c) {
    const int n = 60, p = pdist(rng);
    Eigen::MatrixXd a(n, p);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = z(rng);
    const auto draws = oracle::gamma_sample(n, 3.0, 500 + static_cast<std::uint64_t>(c));
    Eigen::VectorXd eps = Eigen::Map<const Eigen::VectorXd>(draws.data(), n);
    const double s2 = sigma2_gmm(eps);
    const AvarSet av = avar_set(a, ErrorDist::gamma, 1.0 / s2, s2);
    worst_gamma = std::max({worst_gamma, rel_gap(av.opg, av.hessian),
                            rel_gap(av.hessian, av.sandwich)});
  }

  double worst_ln = 0.0;
  for (int c = 0; c < kCases; ++c) {
    const int n = 80, p = pdist(rng);
    Eigen::MatrixXd a(n, p);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = z(rng);
    a.rowwise() -= a.colwise().mean();  // a_bar = 0
    const double V = vdist(rng);
    const AvarSet av = avar_set(a, ErrorDist::lognormal, V, 0.0);
    const Eigen::MatrixXd A = a.transpose() * a / static_cast<double>(n);
    const Eigen::MatrixXd target = V * A.inverse();
    worst_ln = std::max({worst_ln, rel_gap(av.opg, target), rel_gap(av.hessian, target),
                         rel_gap(av.sandwich, target)});
  }

  res.pass = worst_gamma <= kTol && worst_ln <= kTol;
  res.detail = "gamma opg=hessian=sandwich at shape = 1/sigma2: max rel gap " + fmt(worst_gamma) +
               "; lognormal avar = V*A^-1 at centered a: max rel gap " + fmt(worst_ln) +
               "; tol 1e-10 relative, " + std::to_string(kCases) + " random cases each";
  return res;
}

// --- criterion 5: shape-estimator closed forms ----------------------------

Outcome criterion5() {
  Outcome res;
  // two-point fixture with mean eps = 1 and mean ln eps = -euler_gamma, the
  // unique configuration where the Gamma shape FOC is solved by phi = 1
  constexpr double kEulerGamma = 0.57721566490153286;
  const double s = std::sqrt(1.0 - std::exp(-2.0 * kEulerGamma));
  Eigen::VectorXd euler(2);
  euler << 1.0 - s, 1.0 + s;
  const double phi = phi_ml(euler);
  const bool phi_ok = std::abs(phi - 1.0) < 1e-9;

  std::mt19937_64 rng(55);
  std::lognormal_distribution<double> ln(-0.3, std::sqrt(0.6));
  Eigen::VectorXd eps(500);
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = ln(rng);
  const double vhat = v_ml(eps);
  double m2 = 0.0;
  for (Eigen::Index i = 0; i < eps.size(); ++i) m2 += std::log(eps[i]) * std::log(eps[i]);
  m2 /= static_cast<double>(eps.size());
  const double resid = std::abs(vhat * vhat / 4.0 + vhat - m2);
  const bool vml_ok = resid < 1e-12;

  Eigen::VectorXd half(2);
  half << std::exp(-0.25), std::exp(-0.75);  // mean log = -0.5
  const double vmm = v_mm(half);
  const bool vmm_ok = std::abs(vmm - 1.0) < 1e-12;

  res.pass = phi_ok && vml_ok && vmm_ok;
  res.detail = "phi_ml at Euler fixture = " + fmt(phi) + " (tol 1e-9); V_ml quadratic residual " +
               fmt(resid) + " (tol 1e-12); V_mm at mean-log -1/2 = " + fmt(vmm) +
               " (tol 1e-12)";
  return res;
}

// --- criterion 6: beta-lag weight properties ------------------------------

Outcome criterion6() {
  Outcome res;
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> kdist(1, 200);
  std::uniform_real_distribution<double> wdist(1.0, 41.0);

  double worst_sum = 0.0;
  bool nonneg = true;
  for (int c = 0; c < 1000; ++c) {
    const auto w = beta_lag_weights(BetaLag{kdist(rng), 1.0, wdist(rng)});
    double sum = 0.0;
    for (double x : w) {
      sum += x;
      if (x < 0.0) nonneg = false;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }

  bool flat_ok = true;
  for (int K = 1; K <= 12; ++K) {
    const auto w = beta_lag_weights(BetaLag{K, 1.0, 1.0});
    for (double x : w)
      if (x != 1.0 / static_cast<double>(K)) flat_ok = false;
  }

  bool monotone = true;
  std::uniform_int_distribution<int> k2(2, 100);
  std::uniform_real_distribution<double> w2(1.0 + 1e-9, 30.0);
  for (int c = 0; c < 200; ++c) {
    const auto w = beta_lag_weights(BetaLag{k2(rng), 1.0, w2(rng)});
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
      if (w[k] < w[k + 1]) monotone = false;
  }

  res.pass = worst_sum <= 1e-12 && nonneg && flat_ok && monotone;
  res.detail = "max |sum - 1| " + fmt(worst_sum) + " over 1000 random (K, omega2) (tol 1e-12)" +
               (nonneg ? "" : "; NEGATIVE WEIGHT FOUND") +
               (flat_ok ? "; flat case exact" : "; FLAT CASE NOT EXACT") +
               (monotone ? "; non-increasing for omega2 > 1" : "; MONOTONICITY VIOLATED");
  return res;
}

// --- criterion 7: model confidence set sanity ------------------------------

LossPanel synthetic_panel(const std::vector<std::string>& models,
                          const std::vector<double>& shifts, std::size_t n, double noise_sd,
                          std::uint64_t seed) {
  LossPanel panel;
  panel.kind = "qlike";
  panel.models = models;
  panel.dates = business_days(Date{std::chrono::year{2015} / 1 / 5}, n);
  panel.losses.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(models.size()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, noise_sd);
  for (Eigen::Index i = 0; i < panel.losses.rows(); ++i)
    for (Eigen::Index j = 0; j < panel.losses.cols(); ++j)
      panel.losses(i, j) = 1.0 + shifts[static_cast<std::size_t>(j)] + z(rng);
  return panel;
}

Outcome criterion7() {
  Outcome res;
  McsOptions opt;
  opt.alpha = 0.05;
  opt.replications = 500;
  opt.seed = 7;

  const LossPanel dom = synthetic_panel({"good", "bad"}, {0.0, 1.0}, 300, 0.25, 1);
  const McsResult rdom = mcs(dom, opt);
  const bool dom_ok = rdom.surviving == std::vector<std::string>{"good"};

  LossPanel tie = synthetic_panel({"a", "b"}, {0.0, 0.0}, 300, 0.25, 2);
  tie.losses.col(1) = tie.losses.col(0);
  const McsResult rtie = mcs(tie, opt);
  bool tie_ok = rtie.surviving.size() == 2;
  for (const auto& e : rtie.entries)
    if (e.p_value != 1.0 || !e.in_set) tie_ok = false;

  // two equivalent models plus one clearly dominated: the set should come
  // back as exactly {a, b} in at least 90% of seeds
  int exact = 0;
  const int kSeeds = 20;
  for (int sdx = 0; sdx < kSeeds; ++sdx) {
    const LossPanel three =
        synthetic_panel({"a", "b", "c"}, {0.0, 0.0, 0.35}, 400, 0.25,
                        100 + static_cast<std::uint64_t>(sdx));
    McsOptions o3 = opt;
    o3.seed = 1000 + static_cast<std::uint64_t>(sdx);
    const McsResult r3 = mcs(three, o3);
    const std::set<std::string> got(r3.surviving.begin(), r3.surviving.end());
    if (got == std::set<std::string>{"a", "b"}) ++exact;
  }
  const bool three_ok = exact >= 18;

  res.pass = dom_ok && tie_ok && three_ok;
  res.detail = std::string("dominance -> {") +
               (rdom.surviving.empty() ? "" : rdom.surviving.front()) + "}" +
               (dom_ok ? "" : " (EXPECTED {good})") + "; identical losses -> " +
               std::to_string(rtie.surviving.size()) + " survivors with p = 1" +
               (tie_ok ? "" : " (FAILED)") + "; three-model recovery " + std::to_string(exact) +
               "/" + std::to_string(kSeeds) + " seeds (need >= 18), alpha 0.05";
  return res;
}

// --- criterion 8: rolling backtest protocol --------------------------------

Outcome criterion8() {
  constexpr std::size_t kDays = 3084;
  constexpr std::size_t kPoison = 3050;  // first altered day

  Outcome res;
  SimulateOptions o;
  o.n_days = kDays;
  o.shape = 4.0;
  o.seed = 88;
  o.start = Date{std::chrono::year{2015} / 1 / 5};  // same grid as the rebuilt panel below
  const PanelSeries clean = simulate_amem(ShortRunParams{0.08, 0.10, 0.75}, 10.0, o);

  BacktestPlan plan;
  plan.window = 3000;
  plan.stride = 42;
  ModelSettings amem;
  amem.id = ModelId::amem;
  ModelSettings ahar;
  ahar.id = ModelId::ahar;
  plan.models = {amem, ahar};

  const BacktestResult base = rolling_backtest(clean, plan);

  std::map<std::string, int> refits, forecasts;
  for (const auto& r : base.refits) ++refits[r.model];
  for (const auto& r : base.records) ++forecasts[r.model];
  bool counts_ok = refits.size() == 2 && forecasts.size() == 2;
  for (const auto& [model, c] : refits) counts_ok = counts_ok && c == 2;
  for (const auto& [model, c] : forecasts) counts_ok = counts_ok && c == 84;

  // altering the future must leave every forecast for day <= kPoison
  // bit-identical: day d conditions only on data before d
  std::vector<double> rvol, ret;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const DayObs& d = clean.day(i);
    rvol.push_back(i >= kPoison ? 7.0 * d.rvol : d.rvol);
    ret.push_back(i >= kPoison ? -d.ret : d.ret);
  }
  const PanelSeries poisoned = oracle::make_panel(rvol, ret);
  const BacktestResult alt = rolling_backtest(poisoned, plan);

  bool past_identical = base.records.size() == alt.records.size();
  bool future_differs = false;
  if (past_identical) {
    for (std::size_t i = 0; i < base.records.size(); ++i) {
      const auto& a = base.records[i];
      const auto& b = alt.records[i];
      if (a.day_index != b.day_index || a.model != b.model) {
        past_identical = false;
        break;
      }
      if (a.day_index <= kPoison && a.forecast != b.forecast) past_identical = false;
      if (a.day_index > kPoison && a.forecast != b.forecast) future_differs = true;
    }
  }

  res.pass = counts_ok && past_identical && future_differs;
  std::ostringstream detail;
  detail << "refits per model:";
  for (const auto& [model, c] : refits) detail << " " << model << "=" << c;
  detail << " (need 2); forecasts per model:";
  for (const auto& [model, c] : forecasts) detail << " " << model << "=" << c;
  detail << " (need 84); forecasts up to day " << kPoison
         << (past_identical ? " bit-identical under future poisoning" : " CHANGED under poisoning")
         << (future_differs ? "; later forecasts respond" : "; POISON HAD NO EFFECT");
  res.detail = detail.str();
  return res;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc) wanted.insert(std::atoi(argv[++i]));
  }
  auto selected = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};

  bool all_pass = true;
  for (const auto& [id, fn] : criteria) {
    if (!selected(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("unhandled exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << id << ": " << (out.pass ? "PASS" : "FAIL") << " - " << out.detail
              << " [" << fmt(secs) << "s]" << std::endl;
    all_pass = all_pass && out.pass;
  }
  if (selected(9)) {
    std::cout << "criterion 9: SKIPPED - replication of the published conditional tables needs "
                 "the original realized-measure data vintage, which is not bundled"
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
