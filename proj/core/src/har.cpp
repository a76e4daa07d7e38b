#include "dmem/har.hpp"

#include <cmath>
#include <stdexcept>

namespace dmem {

Eigen::RowVectorXd ahar_row(const std::vector<double>& x, const std::vector<unsigned char>& neg,
                            std::size_t i) {
  if (i < kAharLagDays) throw std::invalid_argument("ahar regressors need 22 preceding days");
  Eigen::RowVectorXd row(5);
  row[0] = 1.0;
  row[1] = x[i - 1];
  row[2] = neg[i] ? x[i - 1] : 0.0;
  double m5 = 0.0;
  for (std::size_t k = 2; k <= 5; ++k) m5 += x[i - k];
  row[3] = m5 / 4.0;
  double m22 = 0.0;
  for (std::size_t k = 6; k <= 22; ++k) m22 += x[i - k];
  row[4] = m22 / 17.0;
  return row;
}

AharFit fit_ahar_ols(const PanelSeries& series) {
  const auto x = series.rvol();
  const auto neg = series.lagged_negative();
  if (x.size() <= kAharLagDays + 5)
    throw std::invalid_argument("series too short for the 22-day lag structure");
  const std::size_t rows = x.size() - kAharLagDays;

  Eigen::MatrixXd X(rows, 5);
  Eigen::VectorXd y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    X.row(static_cast<Eigen::Index>(r)) = ahar_row(x, neg, r + kAharLagDays);
    y[static_cast<Eigen::Index>(r)] = x[r + kAharLagDays];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 5) throw std::runtime_error("rank-deficient regressor matrix");

  AharFit fit;
  fit.beta = qr.solve(y);
  const Eigen::VectorXd fitted = X * fit.beta;
  const Eigen::VectorXd u = y - fitted;
  fit.sigma_u2 = u.squaredNorm() / static_cast<double>(rows - 5);

  // heteroskedasticity-robust covariance: (X'X)^-1 X' diag(u^2) X (X'X)^-1
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  const Eigen::VectorXd u2 = u.array().square();
  const Eigen::MatrixXd meat = X.transpose() * u2.asDiagonal() * X;
  const Eigen::MatrixXd cov = xtx_inv * meat * xtx_inv;
  fit.se_robust.resize(5);
  for (Eigen::Index j = 0; j < 5; ++j) fit.se_robust[j] = std::sqrt(cov(j, j));

  fit.fitted.assign(fitted.data(), fitted.data() + fitted.size());
  const double su = std::sqrt(fit.sigma_u2);
  fit.std_residuals.resize(rows);
  for (std::size_t r = 0; r < rows; ++r)
    fit.std_residuals[r] = u[static_cast<Eigen::Index>(r)] / su;
  return fit;
}

std::vector<double> ahar_forecast(const PanelSeries& series, const Eigen::VectorXd& beta,
                                  std::size_t begin, std::size_t end, double floor_value) {
  if (begin < kAharLagDays) throw std::invalid_argument("forecast start inside the lag window");
  if (end > series.size() || begin > end) throw std::out_of_range("forecast range out of bounds");
  const auto x = series.rvol();
  const auto neg = series.lagged_negative();
  std::vector<double> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i)
    out.push_back(std::max(ahar_row(x, neg, i).dot(beta), floor_value));
  return out;
}

}  // namespace dmem
