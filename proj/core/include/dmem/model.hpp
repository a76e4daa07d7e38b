#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dmem/garch.hpp"
#include "dmem/har.hpp"
#include "dmem/inference.hpp"
#include "dmem/mem.hpp"
#include "dmem/panel.hpp"

namespace dmem {

enum class ModelId { amem, cmem, mem_midas, ahar, gjr, gm, dagm, rgarch };

ModelId parse_model_id(const std::string& text);
std::string to_string(ModelId id);

struct ModelSettings {
  ModelId id = ModelId::amem;
  // MEM family choices; ignored by the return-based models
  ErrorDist dist = ErrorDist::gamma;
  MemEstimator estimator = MemEstimator::ml;
  VEstimator v_estimator = VEstimator::mm;
  int K = 12;  // MIDAS lag order where applicable
  BfgsOptions bfgs;
};

// Uniform fit/forecast facade over the eight models. fit() estimates on the
// window it is handed and freezes any window-derived constants into
// FitResult::context. forecast() re-runs the filter over
// series[w_begin, fc_end) with those frozen values, so the value reported
// for day d conditions only on observations before d; results are on the
// volatility scale for every model.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::string name() const = 0;
  virtual FitResult fit(const PanelSeries& window) const = 0;
  virtual std::vector<double> forecast(const PanelSeries& series, const FitResult& fit,
                                       std::size_t w_begin, std::size_t fc_begin,
                                       std::size_t fc_end) const = 0;
};

std::unique_ptr<Model> make_model(const ModelSettings& settings);

// Fit-problem builders for the MEM family, exposed for direct estimation
// and for tests that probe the objective surface.
PathProblem amem_problem(const PanelSeries& window);
PathProblem component_problem(const PanelSeries& window);
PathProblem mem_midas_problem(const PanelSeries& window, int K);

// AharFit repackaged in the common result shape (estimator "ols")
FitResult ahar_fit_result(const PanelSeries& window);

}  // namespace dmem
