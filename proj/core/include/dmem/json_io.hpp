#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmem/backtest.hpp"
#include "dmem/evaluation.hpp"
#include "dmem/inference.hpp"
#include "dmem/mem.hpp"
#include "dmem/model.hpp"
#include "dmem/panel.hpp"

namespace dmem {

struct DataConfig {
  std::string path;
  CsvSchema schema;
  PeriodFrequency frequency = PeriodFrequency::month;
};

struct MacroConfig {
  std::string path;  // empty = no macro series
  MacroSchema schema;
  MacroTransform transform = MacroTransform::level;
};

struct BacktestConfig {
  std::size_t window = 3000;
  std::size_t stride = 42;
  McsOptions mcs;
};

struct SimulateConfig {
  std::string model = "amem";
  std::map<std::string, double> params;  // natural-space values by name
  SimulateOptions options;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  DataConfig data;
  MacroConfig macro;
  std::vector<ModelSettings> models;
  BacktestConfig backtest;
  SimulateConfig simulate;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
// canonical serialization (sorted keys); parse(to_json(c)) == c field by field
std::string run_config_to_json(const RunConfig& config);

// stable stamp for output headers: FNV-1a of the canonical serialization
std::uint64_t config_hash(const RunConfig& config);
// "# dmem x.y.z", "# config <hex>", "# seed <n>" - prepended to every CSV,
// embedded in every JSON result
std::vector<std::string> output_header(const RunConfig& config);

std::string fit_result_to_json(const FitResult& fit, const RunConfig& config);
std::string mcs_result_to_json(const McsResult& qlike_mcs, const McsResult& mse_mcs,
                               const RunConfig& config);

// panel series the simulate command emits, loaded back by the data section
PanelSeries simulate_from_config(const SimulateConfig& sim);

}  // namespace dmem
