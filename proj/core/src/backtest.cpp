#include "dmem/backtest.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace dmem {

namespace {

struct ModelLane {
  std::string name;
  std::unique_ptr<Model> model;
  // most recent successful fit and the window it was estimated on
  bool has_fit = false;
  FitResult fit;
  std::size_t fit_w_begin = 0;
  int fit_refit_id = 0;
  std::vector<double> forecasts;  // one per emitted forecast day, in order
  bool complete = true;           // false once any stride is missing
};

}  // namespace

BacktestResult rolling_backtest(const PanelSeries& series, const BacktestPlan& plan) {
  const std::size_t n = series.size();
  if (plan.window < 2) throw std::invalid_argument("backtest window too short");
  if (plan.stride < 1) throw std::invalid_argument("backtest stride must be >= 1");
  if (plan.window + plan.stride > n)
    throw std::invalid_argument("series shorter than window + stride");
  if (plan.models.empty()) throw std::invalid_argument("backtest needs at least one model");

  BacktestResult result;
  std::vector<ModelLane> lanes;
  lanes.reserve(plan.models.size());
  for (const auto& ms : plan.models) {
    ModelLane lane;
    lane.model = make_model(ms);
    lane.name = lane.model->name();
    for (const auto& other : lanes)
      if (other.name == lane.name)
        throw std::invalid_argument("duplicate model id in backtest plan: " + lane.name);
    lanes.push_back(std::move(lane));
  }

  std::vector<Date> fc_dates;
  std::vector<double> fc_proxy;

  int refit_id = 0;
  for (std::size_t w_begin = 0; w_begin + plan.window < n; w_begin += plan.stride, ++refit_id) {
    const std::size_t w_end = w_begin + plan.window;
    const std::size_t fc_end = std::min(w_end + plan.stride, n);
    const PanelSeries window = series.slice(w_begin, w_end);

    for (std::size_t d = w_end; d < fc_end; ++d) {
      fc_dates.push_back(series.day(d).date);
      fc_proxy.push_back(series.day(d).rvol);
    }

    for (auto& lane : lanes) {
      bool fresh = false;
      try {
        FitResult f = lane.model->fit(window);
        if (!f.converged) throw std::runtime_error("fit did not converge");
        lane.fit = std::move(f);
        lane.fit_w_begin = w_begin;
        lane.fit_refit_id = refit_id;
        lane.has_fit = true;
        fresh = true;
      } catch (const std::exception& e) {
        if (lane.has_fit) {
          result.warnings.push_back("window " + std::to_string(refit_id) + " " + lane.name +
                                    ": fit failed (" + e.what() +
                                    "); carrying parameters from window " +
                                    std::to_string(lane.fit_refit_id));
        } else {
          result.warnings.push_back("window " + std::to_string(refit_id) + " " + lane.name +
                                    ": fit failed (" + std::string(e.what()) +
                                    ") with no prior fit; model dropped from losses");
          lane.complete = false;
        }
      }

      if (lane.has_fit) {
        RefitRecord rec;
        rec.refit_id = refit_id;
        rec.w_begin = w_begin;
        rec.w_end = w_end;
        rec.model = lane.name;
        rec.fit = lane.fit;
        rec.carried = !fresh;
        result.refits.push_back(std::move(rec));
        try {
          const auto fc = lane.model->forecast(series, lane.fit, lane.fit_w_begin, w_end, fc_end);
          for (std::size_t d = w_end; d < fc_end; ++d) {
            ForecastRecord r;
            r.date = series.day(d).date;
            r.day_index = d;
            r.model = lane.name;
            r.refit_id = lane.fit_refit_id;
            r.forecast = fc[d - w_end];
            r.proxy = series.day(d).rvol;
            result.records.push_back(std::move(r));
            lane.forecasts.push_back(fc[d - w_end]);
          }
        } catch (const std::exception& e) {
          result.warnings.push_back("window " + std::to_string(refit_id) + " " + lane.name +
                                    ": forecast failed (" + e.what() +
                                    "); model dropped from losses");
          lane.complete = false;
        }
      } else {
        lane.complete = false;
      }
    }
  }

  // assemble aligned loss panels over models that produced every forecast
  std::vector<std::string> kept_models;
  std::vector<const std::vector<double>*> kept_fc;
  for (const auto& lane : lanes) {
    if (lane.complete && lane.forecasts.size() == fc_dates.size()) {
      kept_models.push_back(lane.name);
      kept_fc.push_back(&lane.forecasts);
    } else if (lane.complete) {
      result.warnings.push_back(lane.name + ": incomplete forecast stream; dropped from losses");
    }
  }

  std::vector<std::size_t> kept_days;
  for (std::size_t i = 0; i < fc_proxy.size(); ++i) {
    if (fc_proxy[i] > 0.0) {
      kept_days.push_back(i);
    } else {
      result.warnings.push_back("zero realized volatility on " + format_date(fc_dates[i]) +
                                "; day dropped from losses");
    }
  }

  if (!kept_models.empty() && !kept_days.empty()) {
    std::vector<Date> dates;
    std::vector<double> proxy;
    dates.reserve(kept_days.size());
    proxy.reserve(kept_days.size());
    for (std::size_t i : kept_days) {
      dates.push_back(fc_dates[i]);
      proxy.push_back(fc_proxy[i]);
    }
    std::vector<std::vector<double>> fcs(kept_models.size());
    for (std::size_t m = 0; m < kept_models.size(); ++m) {
      fcs[m].reserve(kept_days.size());
      for (std::size_t i : kept_days) fcs[m].push_back((*kept_fc[m])[i]);
    }
    result.qlike = loss_panel("qlike", kept_models, dates, fcs, proxy);
    result.mse = loss_panel("mse", kept_models, dates, fcs, proxy);
  } else {
    result.qlike.kind = "qlike";
    result.mse.kind = "mse";
  }

  return result;
}

}  // namespace dmem
