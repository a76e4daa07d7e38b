#include "dmem/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dmem/version.hpp"
#include "json.hpp"

namespace dmem {

namespace {

using nlohmann::json;

json schema_to_json(const CsvSchema& s) {
  return json{{"date_column", s.date_column},
              {"return_column", s.return_column},
              {"rvol_column", s.rvol_column},
              {"rvariance_column", s.rvariance_column},
              {"annualization", s.annualization}};
}

CsvSchema schema_from_json(const json& j) {
  CsvSchema s;
  s.date_column = j.value("date_column", s.date_column);
  s.return_column = j.value("return_column", s.return_column);
  s.rvol_column = j.value("rvol_column", std::string());
  s.rvariance_column = j.value("rvariance_column", std::string());
  s.annualization = j.value("annualization", s.annualization);
  return s;
}

json model_to_json(const ModelSettings& m) {
  return json{{"id", to_string(m.id)},
              {"dist", to_string(m.dist)},
              {"estimator", to_string(m.estimator)},
              {"v_estimator", to_string(m.v_estimator)},
              {"K", m.K}};
}

ModelSettings model_from_json(const json& j) {
  ModelSettings m;
  m.id = parse_model_id(j.at("id").get<std::string>());
  m.dist = parse_error_dist(j.value("dist", "gamma"));
  m.estimator = parse_mem_estimator(j.value("estimator", "ml"));
  m.v_estimator = parse_v_estimator(j.value("v_estimator", "mm"));
  m.K = j.value("K", 12);
  if (m.K < 1) throw std::invalid_argument("model K must be >= 1");
  return m;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json header_json(const RunConfig& config) {
  std::ostringstream hex;
  hex << std::hex << config_hash(config);
  return json{{"version", std::string(version_string)},
              {"config", hex.str()},
              {"seed", config.seed}};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (j.contains("data")) {
    const json& d = j.at("data");
    c.data.path = d.value("path", std::string());
    c.data.schema = schema_from_json(d);
    c.data.frequency = parse_frequency(d.value("frequency", "month"));
  }
  if (j.contains("macro")) {
    const json& m = j.at("macro");
    c.macro.path = m.value("path", std::string());
    c.macro.schema.period_column = m.value("period_column", c.macro.schema.period_column);
    c.macro.schema.value_column = m.value("value_column", c.macro.schema.value_column);
    c.macro.transform = parse_macro_transform(m.value("transform", "level"));
  }
  if (j.contains("models")) {
    for (const json& m : j.at("models")) c.models.push_back(model_from_json(m));
  }
  if (j.contains("backtest")) {
    const json& b = j.at("backtest");
    c.backtest.window = b.value("window", c.backtest.window);
    c.backtest.stride = b.value("stride", c.backtest.stride);
    if (b.contains("mcs")) {
      const json& m = b.at("mcs");
      c.backtest.mcs.alpha = m.value("alpha", c.backtest.mcs.alpha);
      c.backtest.mcs.replications = m.value("replications", c.backtest.mcs.replications);
      c.backtest.mcs.block_length = m.value("block_length", c.backtest.mcs.block_length);
      c.backtest.mcs.seed = m.value("seed", c.backtest.mcs.seed);
    }
  }
  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    c.simulate.model = s.value("model", c.simulate.model);
    if (s.contains("params")) {
      for (auto it = s.at("params").begin(); it != s.at("params").end(); ++it)
        c.simulate.params[it.key()] = it.value().get<double>();
    }
    SimulateOptions& o = c.simulate.options;
    o.n_days = s.value("n_days", o.n_days);
    o.dist = parse_error_dist(s.value("dist", "gamma"));
    o.shape = s.value("shape", o.shape);
    o.seed = s.value("seed", c.seed);
    if (s.contains("start")) o.start = parse_date(s.at("start").get<std::string>());
    o.frequency = parse_frequency(s.value("frequency", "month"));
    o.macro_rho = s.value("macro_rho", o.macro_rho);
    o.macro_sd = s.value("macro_sd", o.macro_sd);
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& c) {
  json d = schema_to_json(c.data.schema);
  d["path"] = c.data.path;
  d["frequency"] = to_string(c.data.frequency);

  json models = json::array();
  for (const auto& m : c.models) models.push_back(model_to_json(m));

  json sim_params = json::object();
  for (const auto& [k, v] : c.simulate.params) sim_params[k] = v;

  const json j{
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"data", d},
      {"macro",
       {{"path", c.macro.path},
        {"period_column", c.macro.schema.period_column},
        {"value_column", c.macro.schema.value_column},
        {"transform", to_string(c.macro.transform)}}},
      {"models", models},
      {"backtest",
       {{"window", c.backtest.window},
        {"stride", c.backtest.stride},
        {"mcs",
         {{"alpha", c.backtest.mcs.alpha},
          {"replications", c.backtest.mcs.replications},
          {"block_length", c.backtest.mcs.block_length},
          {"seed", c.backtest.mcs.seed}}}}},
      {"simulate",
       {{"model", c.simulate.model},
        {"params", sim_params},
        {"n_days", c.simulate.options.n_days},
        {"dist", to_string(c.simulate.options.dist)},
        {"shape", c.simulate.options.shape},
        {"seed", c.simulate.options.seed},
        {"start", format_date(c.simulate.options.start)},
        {"frequency", to_string(c.simulate.options.frequency)},
        {"macro_rho", c.simulate.options.macro_rho},
        {"macro_sd", c.simulate.options.macro_sd}}}};
  return j.dump(2);
}

std::uint64_t config_hash(const RunConfig& config) {
  return fnv1a_hash(run_config_to_json(config));
}

std::vector<std::string> output_header(const RunConfig& config) {
  std::ostringstream hex;
  hex << std::hex << config_hash(config);
  return {"# " + std::string(version_string), "# config " + hex.str(),
          "# seed " + std::to_string(config.seed)};
}

std::string fit_result_to_json(const FitResult& fit, const RunConfig& config) {
  json lb = json::object();
  for (const auto& [lag, qp] : fit.ljung_box)
    lb[std::to_string(lag)] = json{{"statistic", qp.first}, {"p_value", qp.second}};
  json ctx = json::object();
  for (const auto& [k, v] : fit.context) ctx[k] = v;
  const json j{{"header", header_json(config)},
               {"model", fit.model},
               {"estimator", fit.estimator},
               {"param_names", fit.param_names},
               {"theta", vec_to_json(fit.theta)},
               {"se_opg", vec_to_json(fit.se_opg)},
               {"se_hessian", vec_to_json(fit.se_hessian)},
               {"se_sandwich", vec_to_json(fit.se_sandwich)},
               {"avar_sandwich", mat_to_json(fit.avar_sandwich)},
               {"loglik", fit.loglik},
               {"criterion", fit.criterion},
               {"sigma2", fit.sigma2},
               {"shape", fit.shape},
               {"score_norm", fit.score_norm},
               {"converged", fit.converged},
               {"boundary", fit.boundary},
               {"iterations", fit.iterations},
               {"ljung_box", lb},
               {"notes", fit.notes},
               {"context", ctx}};
  return j.dump(2);
}

namespace {

json mcs_to_json_one(const McsResult& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back(json{{"model", e.model},
                           {"p_value", e.p_value},
                           {"elimination_order", e.elimination_order},
                           {"in_set", e.in_set}});
  return json{{"entries", entries},
              {"surviving", r.surviving},
              {"alpha", r.settings.alpha},
              {"replications", r.settings.replications},
              {"block_length", r.block_length_used},
              {"bootstrap_seed", r.settings.seed}};
}

}  // namespace

std::string mcs_result_to_json(const McsResult& qlike_mcs, const McsResult& mse_mcs,
                               const RunConfig& config) {
  const json j{{"header", header_json(config)},
               {"qlike", mcs_to_json_one(qlike_mcs)},
               {"mse", mcs_to_json_one(mse_mcs)}};
  return j.dump(2);
}

PanelSeries simulate_from_config(const SimulateConfig& sim) {
  const auto& p = sim.params;
  auto req = [&p, &sim](const std::string& name) {
    auto it = p.find(name);
    if (it == p.end())
      throw std::invalid_argument("simulate model '" + sim.model + "' needs parameter '" + name +
                                  "'");
    return it->second;
  };
  auto opt_value = [&p](const std::string& name, double fallback) {
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
  };
  const ModelId id = parse_model_id(sim.model);
  switch (id) {
    case ModelId::amem: {
      ShortRunParams s{req("alpha1"), req("gamma1"), req("beta1")};
      return simulate_amem(s, req("level"), sim.options);
    }
    case ModelId::cmem: {
      ShortRunParams s{req("alpha1"), req("gamma1"), req("beta1")};
      LongRunComponentParams l;
      l.omega_tau = req("omega_tau");
      l.alpha1_tau = req("alpha1_tau");
      l.gamma1_tau = req("gamma1_tau");
      l.beta1_tau = req("beta1_tau");
      return simulate_component(s, l, sim.options);
    }
    case ModelId::mem_midas: {
      ShortRunParams s{req("alpha1"), req("gamma1"), req("beta1")};
      MidasLongRunParams l;
      l.m = req("m");
      l.zeta = req("zeta");
      l.lag = BetaLag{static_cast<int>(opt_value("K", 12.0)), 1.0, req("omega2")};
      return simulate_mem_midas(s, l, sim.options);
    }
    case ModelId::gjr: {
      const GjrParams g{req("const"), req("alpha1"), req("gamma1"), req("beta1")};
      return simulate_gjr(g, sim.options);
    }
    case ModelId::gm: {
      GmParams g;
      g.alpha1 = req("alpha1");
      g.gamma1 = req("gamma1");
      g.beta1 = req("beta1");
      g.m = req("m");
      g.zeta = req("zeta");
      g.lag = BetaLag{static_cast<int>(opt_value("K", 12.0)), 1.0, req("omega2")};
      return simulate_gm(g, sim.options);
    }
    case ModelId::rgarch: {
      const RgarchParams g{req("const"), req("beta1"), req("alpha1"), req("xi_m"),
                           req("phi_m"), req("tau1"),  req("tau2"),   req("sigma_u2")};
      return simulate_rgarch(g, req("h1"), sim.options);
    }
    case ModelId::ahar:
    case ModelId::dagm:
      throw std::invalid_argument("no simulator for model '" + sim.model + "'");
  }
  throw std::logic_error("unhandled model id");
}

}  // namespace dmem
