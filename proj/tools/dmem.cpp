// volatility-model toolkit: fit, rolling backtest, simulation, and long-run
// component extraction over daily realized-volatility panels
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmem/backtest.hpp"
#include "dmem/csv.hpp"
#include "dmem/evaluation.hpp"
#include "dmem/json_io.hpp"
#include "dmem/model.hpp"
#include "dmem/panel.hpp"
#include "dmem/version.hpp"

namespace fs = std::filesystem;
using namespace dmem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
  auto* seed = cmd->add_option("--seed", args.seed, "override config seed");
  auto* out = cmd->add_option("--out", args.out_dir, "override output directory");
  cmd->callback([seed, out, &args] {
    args.seed_set = seed->count() > 0;
    args.out_set = out->count() > 0;
  });
}

RunConfig load_with_overrides(const CommonArgs& args) {
  RunConfig cfg = load_run_config(args.config_path);
  if (args.seed_set) {
    cfg.seed = args.seed;
    cfg.simulate.options.seed = args.seed;
    cfg.backtest.mcs.seed = args.seed;
  }
  if (args.out_set) cfg.out_dir = args.out_dir;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

PanelSeries load_panel(const RunConfig& cfg) {
  if (cfg.data.path.empty()) throw std::invalid_argument("config has no data.path");
  LoadedPanel loaded = load_daily_csv(cfg.data.path, cfg.data.schema, cfg.data.frequency);
  PanelSeries series = loaded.series;
  if (!cfg.macro.path.empty())
    series = attach_macro(series, cfg.macro.path, cfg.macro.schema, cfg.macro.transform);
  return series;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void write_table(const fs::path& path, CsvTable table, const RunConfig& cfg) {
  table.comments = output_header(cfg);
  write_csv_file(path.string(), table);
}

std::vector<std::unique_ptr<Model>> build_models(const RunConfig& cfg) {
  if (cfg.models.empty()) throw std::invalid_argument("config lists no models");
  std::set<std::string> seen;
  std::vector<std::unique_ptr<Model>> models;
  for (const auto& ms : cfg.models) {
    auto m = make_model(ms);
    if (!seen.insert(m->name()).second)
      throw std::invalid_argument("duplicate model id in config: " + m->name());
    models.push_back(std::move(m));
  }
  return models;
}

int cmd_fit(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const PanelSeries series = load_panel(cfg);
  auto models = build_models(cfg);

  CsvTable params;
  params.columns = {"model", "estimator", "param", "estimate", "se_opg", "se_hessian",
                    "se_sandwich"};
  CsvTable diag;
  diag.columns = {"model", "estimator", "lag", "q_statistic", "p_value"};

  for (const auto& model : models) {
    FitResult fit;
    try {
      fit = model->fit(series);
    } catch (const std::exception& e) {
      throw std::runtime_error(model->name() + ": " + e.what());
    }
    write_text(fs::path(cfg.out_dir) / ("fit_" + fit.model + ".json"),
               fit_result_to_json(fit, cfg));

    CsvTable paths;
    paths.columns = {"date", "mu", "tau", "xi", "residual"};
    for (std::size_t i = 0; i < series.size(); ++i) {
      paths.rows.push_back({format_date(series.day(i).date),
                            format_double(i < fit.path.mu.size() ? fit.path.mu[i] : 0.0),
                            format_double(i < fit.path.tau.size() ? fit.path.tau[i] : 0.0),
                            format_double(i < fit.path.xi.size() ? fit.path.xi[i] : 0.0),
                            format_double(i < fit.path.residuals.size() ? fit.path.residuals[i]
                                                                        : 0.0)});
    }
    write_table(fs::path(cfg.out_dir) / ("paths_" + fit.model + ".csv"), std::move(paths), cfg);

    for (Eigen::Index k = 0; k < fit.theta.size(); ++k) {
      params.rows.push_back(
          {fit.model, fit.estimator, fit.param_names[static_cast<std::size_t>(k)],
           format_double(fit.theta[k]),
           format_double(k < fit.se_opg.size() ? fit.se_opg[k] : 0.0),
           format_double(k < fit.se_hessian.size() ? fit.se_hessian[k] : 0.0),
           format_double(k < fit.se_sandwich.size() ? fit.se_sandwich[k] : 0.0)});
    }
    for (const auto& [lag, qp] : fit.ljung_box) {
      diag.rows.push_back({fit.model, fit.estimator, std::to_string(lag),
                           format_double(qp.first), format_double(qp.second)});
    }
  }

  write_table(fs::path(cfg.out_dir) / "params.csv", std::move(params), cfg);
  write_table(fs::path(cfg.out_dir) / "diagnostics.csv", std::move(diag), cfg);
  return 0;
}

int year_of(const Date& d) { return static_cast<int>(d.year()); }

int cmd_backtest(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const PanelSeries series = load_panel(cfg);
  if (cfg.models.empty()) throw std::invalid_argument("config lists no models");

  BacktestPlan plan;
  plan.window = cfg.backtest.window;
  plan.stride = cfg.backtest.stride;
  plan.models = cfg.models;
  const BacktestResult result = rolling_backtest(series, plan);

  CsvTable fc;
  fc.columns = {"date", "day_index", "model", "refit_id", "forecast", "proxy"};
  for (const auto& r : result.records) {
    fc.rows.push_back({format_date(r.date), std::to_string(r.day_index), r.model,
                       std::to_string(r.refit_id), format_double(r.forecast),
                       format_double(r.proxy)});
  }
  write_table(fs::path(cfg.out_dir) / "forecasts.csv", std::move(fc), cfg);

  if (result.qlike.models.empty())
    throw std::runtime_error("no model produced a complete forecast stream");

  McsResult mcs_q, mcs_m;
  const bool can_mcs = result.qlike.models.size() >= 2;
  if (can_mcs) {
    mcs_q = mcs(result.qlike, cfg.backtest.mcs);
    mcs_m = mcs(result.mse, cfg.backtest.mcs);
  } else {
    // single-model run: the set is trivially that model
    McsEntry e;
    e.model = result.qlike.models.front();
    e.p_value = 1.0;
    e.in_set = true;
    mcs_q.entries = {e};
    mcs_q.surviving = {e.model};
    mcs_q.settings = cfg.backtest.mcs;
    mcs_m = mcs_q;
    mcs_m.settings = cfg.backtest.mcs;
  }
  write_text(fs::path(cfg.out_dir) / "mcs.json", mcs_result_to_json(mcs_q, mcs_m, cfg));

  // long-format per-day losses, then per-year and full-sample means with
  // membership flags from an MCS run on each row's sub-panel
  auto write_losses = [&](const LossPanel& panel, const McsResult& full_mcs,
                          const std::string& stem) {
    CsvTable per_day;
    per_day.columns = {"date", "model", "loss"};
    for (std::size_t i = 0; i < panel.dates.size(); ++i)
      for (std::size_t m = 0; m < panel.models.size(); ++m)
        per_day.rows.push_back(
            {format_date(panel.dates[i]), panel.models[m],
             format_double(panel.losses(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(m)))});
    write_table(fs::path(cfg.out_dir) / ("losses_" + stem + ".csv"), std::move(per_day), cfg);

    std::map<int, std::vector<std::size_t>> by_year;
    for (std::size_t i = 0; i < panel.dates.size(); ++i)
      by_year[year_of(panel.dates[i])].push_back(i);

    auto in_set_of = [&](const McsResult& r) {
      std::map<std::string, bool> flags;
      for (const auto& e : r.entries) flags[e.model] = e.in_set;
      return flags;
    };

    CsvTable summary;
    summary.columns = {"period", "model", "mean_loss", "n_days", "in_mcs"};
    auto emit_rows = [&](const std::string& label, const std::vector<std::size_t>& idx,
                         const std::map<std::string, bool>* flags) {
      for (std::size_t m = 0; m < panel.models.size(); ++m) {
        double s = 0.0;
        for (std::size_t i : idx)
          s += panel.losses(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
        const double mean = s / static_cast<double>(idx.size());
        std::string flag;
        if (flags) {
          auto it = flags->find(panel.models[m]);
          flag = (it != flags->end() && it->second) ? "1" : "0";
        }
        summary.rows.push_back({label, panel.models[m], format_double(mean),
                                std::to_string(idx.size()), flag});
      }
    };

    for (const auto& [year, idx] : by_year) {
      std::map<std::string, bool> year_flags;
      bool have_flags = false;
      if (can_mcs && idx.size() >= 50) {
        LossPanel sub;
        sub.kind = panel.kind;
        sub.models = panel.models;
        sub.losses.resize(static_cast<Eigen::Index>(idx.size()),
                          static_cast<Eigen::Index>(panel.models.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
          sub.dates.push_back(panel.dates[idx[i]]);
          sub.losses.row(static_cast<Eigen::Index>(i)) =
              panel.losses.row(static_cast<Eigen::Index>(idx[i]));
        }
        year_flags = in_set_of(mcs(sub, cfg.backtest.mcs));
        have_flags = true;
      }
      emit_rows(std::to_string(year), idx, have_flags ? &year_flags : nullptr);
    }
    std::vector<std::size_t> all(panel.dates.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto full_flags = in_set_of(full_mcs);
    emit_rows("full", all, &full_flags);
    write_table(fs::path(cfg.out_dir) / ("loss_summary_" + stem + ".csv"), std::move(summary),
                cfg);
  };
  write_losses(result.qlike, mcs_q, "qlike");
  write_losses(result.mse, mcs_m, "mse");

  if (!result.warnings.empty()) {
    std::string text;
    for (const auto& w : result.warnings) text += w + "\n";
    write_text(fs::path(cfg.out_dir) / "warnings.txt", text);
  }
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const PanelSeries series = simulate_from_config(cfg.simulate);

  std::vector<std::string> comments = output_header(cfg);
  comments.push_back("# model " + cfg.simulate.model);
  comments.push_back("# n_days " + std::to_string(cfg.simulate.options.n_days));
  comments.push_back("# dist " + to_string(cfg.simulate.options.dist) + " shape " +
                     format_double(cfg.simulate.options.shape));
  for (const auto& [k, v] : cfg.simulate.params)
    comments.push_back("# param " + k + " " + format_double(v));

  const fs::path data_path = fs::path(cfg.out_dir) / ("sim_" + cfg.simulate.model + ".csv");
  write_daily_csv(data_path.string(), series, comments);

  if (series.has_macro()) {
    CsvTable macro;
    macro.columns = {"period", "value"};
    for (const auto& [period, value] : series.macro())
      macro.rows.push_back({to_string(period, series.frequency()), format_double(value)});
    write_table(fs::path(cfg.out_dir) / ("sim_" + cfg.simulate.model + "_macro.csv"),
                std::move(macro), cfg);
  }
  return 0;
}

int cmd_longrun(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const PanelSeries series = load_panel(cfg);
  auto models = build_models(cfg);
  const std::string index_name = fs::path(cfg.data.path).stem().string();

  CsvTable longrun;
  longrun.columns = {"period", "value", "model", "index"};
  std::vector<std::string> names;
  std::vector<std::vector<double>> monthly;
  for (const auto& model : models) {
    FitResult fit;
    try {
      fit = model->fit(series);
    } catch (const std::exception& e) {
      throw std::runtime_error(model->name() + ": " + e.what());
    }
    const auto agg = aggregate_tau_monthly(fit.path.tau, series);
    std::vector<double> values;
    for (const auto& [period, value] : agg) {
      longrun.rows.push_back({to_string(period, series.frequency()), format_double(value),
                              model->name(), index_name});
      values.push_back(value);
    }
    names.push_back(model->name());
    monthly.push_back(std::move(values));
  }
  write_table(fs::path(cfg.out_dir) / "longrun.csv", std::move(longrun), cfg);

  CsvTable corr;
  corr.columns = {"model_a", "model_b", "correlation"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      std::string value;
      try {
        value = format_double(pearson(monthly[i], monthly[j]));
      } catch (const std::exception&) {
        value = "nan";  // constant long-run path, correlation undefined
      }
      corr.rows.push_back({names[i], names[j], value});
    }
  }
  write_table(fs::path(cfg.out_dir) / "longrun_corr.csv", std::move(corr), cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(version_string) +
               " - multiplicative error and GARCH-family volatility models"};
  app.require_subcommand(1);

  CommonArgs fit_args, bt_args, sim_args, lr_args;
  auto* fit = app.add_subcommand("fit", "estimate models on the full panel");
  add_common(fit, fit_args);
  auto* bt = app.add_subcommand("backtest", "rolling out-of-sample forecast comparison");
  add_common(bt, bt_args);
  auto* sim = app.add_subcommand("simulate", "generate a synthetic panel");
  add_common(sim, sim_args);
  auto* lr = app.add_subcommand("longrun", "extract and compare long-run components");
  add_common(lr, lr_args);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*fit) return cmd_fit(fit_args);
    if (*bt) return cmd_backtest(bt_args);
    if (*sim) return cmd_simulate(sim_args);
    if (*lr) return cmd_longrun(lr_args);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"command", command}, {"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
