#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "dmem/panel.hpp"

namespace dmem {

// rvol_i = c + (b1 + g1 * neg_i) rvol_{i-1} + b5 mean(rvol_{i-2..i-5})
//        + b22 mean(rvol_{i-6..i-22}) + u_i
inline constexpr std::size_t kAharLagDays = 22;
inline constexpr double kAharForecastFloor = 1e-8;

struct AharFit {
  Eigen::VectorXd beta;  // c, b1, g1, b5, b22
  Eigen::VectorXd se_robust;
  double sigma_u2 = 0.0;
  std::vector<double> fitted;         // per regression row, first row = day kAharLagDays
  std::vector<double> std_residuals;  // u / sigma_u
};

Eigen::RowVectorXd ahar_row(const std::vector<double>& x, const std::vector<unsigned char>& neg,
                            std::size_t i);

AharFit fit_ahar_ols(const PanelSeries& series);

// X row * beta for each day in [begin, end), floored at floor_value
std::vector<double> ahar_forecast(const PanelSeries& series, const Eigen::VectorXd& beta,
                                  std::size_t begin, std::size_t end,
                                  double floor_value = kAharForecastFloor);

}  // namespace dmem
