#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dmem/mem.hpp"
#include "dmem/panel.hpp"

namespace dmem {

// robust volatility losses, zero-minimum at fc == proxy
double qlike(double proxy, double fc);
double mse(double proxy, double fc);

// sample autocorrelations rho_1..rho_max_lag (mean-adjusted)
std::vector<double> acf(const std::vector<double>& x, int max_lag);
// Q = N (N+2) sum_{j<=lag} rho_j^2 / (N-j); p from chi-square(lag)
std::pair<double, double> ljung_box_from_acf(const std::vector<double>& rho, std::size_t n,
                                             int lag);
std::pair<double, double> ljung_box(const std::vector<double>& x, int lag);

struct LossPanel {
  std::string kind;  // "qlike" | "mse"
  std::vector<std::string> models;
  std::vector<Date> dates;
  Eigen::MatrixXd losses;  // dates x models
};

LossPanel loss_panel(const std::string& kind, const std::vector<std::string>& models,
                     const std::vector<Date>& dates,
                     const std::vector<std::vector<double>>& forecasts,
                     const std::vector<double>& proxy);

struct McsOptions {
  double alpha = 0.25;
  int replications = 5000;
  int block_length = 0;  // 0 = ceil(N^(1/3))
  std::uint64_t seed = 42;
};

struct McsEntry {
  std::string model;
  double p_value = 1.0;        // monotonized elimination p-value
  int elimination_order = 0;   // 1 = first out; 0 = never eliminated
  bool in_set = false;         // p_value >= alpha
};

struct McsResult {
  std::vector<McsEntry> entries;
  std::vector<std::string> surviving;
  McsOptions settings;
  int block_length_used = 0;
};

// Model confidence set with the semi-quadratic statistic T_SQ = sum_{i<j} t_ij^2
// and a moving-block bootstrap null.
McsResult mcs(const LossPanel& panel, const McsOptions& opt = {});

// per-period arithmetic mean of a daily path
std::vector<std::pair<PeriodId, double>> aggregate_tau_monthly(const std::vector<double>& tau,
                                                               const PanelSeries& series);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
Eigen::MatrixXd correlation_matrix(const std::vector<std::vector<double>>& series);

}  // namespace dmem
