#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

#include "dmem/evaluation.hpp"

namespace dmem {

double qlike(double proxy, double fc) {
  if (!(proxy > 0.0) || !(fc > 0.0))
    throw std::domain_error("qlike needs positive proxy and forecast");
  const double r = proxy / fc;
  return r - std::log(r) - 1.0;
}

double mse(double proxy, double fc) {
  const double d = proxy - fc;
  return d * d;
}

std::vector<double> acf(const std::vector<double>& x, int max_lag) {
  const std::size_t n = x.size();
  if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
  if (n <= static_cast<std::size_t>(max_lag))
    throw std::invalid_argument("series shorter than requested lag");
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : x) denom += (v - m) * (v - m);
  if (denom == 0.0) throw std::domain_error("autocorrelation undefined for a constant series");
  std::vector<double> rho(max_lag);
  for (int j = 1; j <= max_lag; ++j) {
    double s = 0.0;
    for (std::size_t i = static_cast<std::size_t>(j); i < n; ++i)
      s += (x[i] - m) * (x[i - j] - m);
    rho[j - 1] = s / denom;
  }
  return rho;
}

std::pair<double, double> ljung_box_from_acf(const std::vector<double>& rho, std::size_t n,
                                             int lag) {
  if (lag < 1 || rho.size() < static_cast<std::size_t>(lag))
    throw std::invalid_argument("need autocorrelations up to the requested lag");
  double q = 0.0;
  for (int j = 1; j <= lag; ++j)
    q += rho[j - 1] * rho[j - 1] / static_cast<double>(n - static_cast<std::size_t>(j));
  q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
  const double p = q <= 0.0 ? 1.0 : boost::math::gamma_q(lag / 2.0, q / 2.0);
  return {q, p};
}

std::pair<double, double> ljung_box(const std::vector<double>& x, int lag) {
  return ljung_box_from_acf(acf(x, lag), x.size(), lag);
}

LossPanel loss_panel(const std::string& kind, const std::vector<std::string>& models,
                     const std::vector<Date>& dates,
                     const std::vector<std::vector<double>>& forecasts,
                     const std::vector<double>& proxy) {
  if (kind != "qlike" && kind != "mse") throw std::invalid_argument("loss kind must be qlike or mse");
  if (forecasts.size() != models.size())
    throw std::invalid_argument("one forecast vector per model required");
  LossPanel panel;
  panel.kind = kind;
  panel.models = models;
  panel.dates = dates;
  panel.losses.resize(static_cast<Eigen::Index>(dates.size()),
                      static_cast<Eigen::Index>(models.size()));
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (forecasts[m].size() != dates.size() || proxy.size() != dates.size())
      throw std::invalid_argument("forecast/proxy length mismatch");
    for (std::size_t i = 0; i < dates.size(); ++i)
      panel.losses(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
          kind == "qlike" ? qlike(proxy[i], forecasts[m][i]) : mse(proxy[i], forecasts[m][i]);
  }
  return panel;
}

std::vector<std::pair<PeriodId, double>> aggregate_tau_monthly(const std::vector<double>& tau,
                                                               const PanelSeries& series) {
  if (tau.size() != series.size()) throw std::invalid_argument("path/panel length mismatch");
  std::vector<std::pair<PeriodId, double>> out;
  std::size_t i = 0;
  while (i < tau.size()) {
    const PeriodId p = series.period(i);
    double s = 0.0;
    std::size_t count = 0;
    while (i < tau.size() && series.period(i) == p) {
      s += tau[i];
      ++count;
      ++i;
    }
    out.emplace_back(p, s / static_cast<double>(count));
  }
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("series length mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw std::domain_error("correlation undefined for constant series");
  return sab / std::sqrt(saa * sbb);
}

Eigen::MatrixXd correlation_matrix(const std::vector<std::vector<double>>& series) {
  const std::size_t m = series.size();
  Eigen::MatrixXd c(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r = pearson(series[i], series[j]);
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
      c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
    }
  }
  return c;
}

}  // namespace dmem
