#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dmem/calendar.hpp"
#include "dmem/evaluation.hpp"
#include "dmem/inference.hpp"
#include "dmem/model.hpp"
#include "dmem/panel.hpp"

namespace dmem {

struct BacktestPlan {
  std::size_t window = 3000;  // estimation length in trading days
  std::size_t stride = 42;    // days between refits; also the forecast block
  std::vector<ModelSettings> models;
};

struct ForecastRecord {
  Date date{};
  std::size_t day_index = 0;
  std::string model;
  int refit_id = 0;  // index of the window whose parameters produced this value
  double forecast = 0.0;  // volatility scale
  double proxy = 0.0;     // realized volatility the same day
};

struct RefitRecord {
  int refit_id = 0;
  std::size_t w_begin = 0, w_end = 0;
  std::string model;
  FitResult fit;
  bool carried = false;  // true when this window reuses an older fit
};

struct BacktestResult {
  std::vector<ForecastRecord> records;
  std::vector<RefitRecord> refits;
  LossPanel qlike;
  LossPanel mse;
  std::vector<std::string> warnings;
};

// Rolling re-estimation: window k covers [k*stride, k*stride + window) and
// produces one-step-ahead forecasts for the following stride (truncated at
// the sample end). A window whose fit fails keeps the previous successful
// parameters; a model that never fit, or whose forecasts error, is excluded
// from the loss panels with a warning. Days with zero realized volatility
// are dropped from the loss panels (QLIKE needs a positive proxy).
BacktestResult rolling_backtest(const PanelSeries& series, const BacktestPlan& plan);

}  // namespace dmem
