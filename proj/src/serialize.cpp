#include "mdd/serialize.hpp"

#include "mdd/error.hpp"

namespace mdd {

using nlohmann::ordered_json;

ordered_json to_json(const TestResult& r) {
  ordered_json j;
  j["method"] = to_string(r.method);
  j["calibration"] = to_string(r.calibration);
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["mdd_sum"] = r.mdd_sum;
  j["variance_estimate"] = r.variance_estimate;
  j["n"] = r.n;
  j["p"] = r.p;
  j["tau"] = r.tau ? ordered_json(*r.tau) : ordered_json(nullptr);
  j["quantile_estimate"] = r.quantile_estimate ? ordered_json(*r.quantile_estimate) : ordered_json(nullptr);
  j["bootstrap_draws"] = r.bootstrap_draws;
  j["degenerate_draws"] = r.degenerate_draws;
  return j;
}

ordered_json to_json(const SimulationConfig& c) {
  ordered_json j;
  j["dgp"] = to_string(c.dgp);
  j["n"] = c.n;
  j["p"] = c.p;
  j["T"] = c.window;
  j["error"] = to_string(c.error);
  j["beta"] = to_string(c.beta_mode);
  j["beta_norm"] = c.beta_norm;
  j["tau"] = c.tau ? ordered_json(*c.tau) : ordered_json(nullptr);
  j["joint"] = c.joint;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["alpha"] = c.alpha_levels;
  j["bootstrap"] = c.bootstrap_draws;
  j["multiplier"] = to_string(c.multiplier);
  if (is_factorial(c.dgp)) {
    j["covariates"] = to_string(c.factorial_covariates);
    j["cell_windows"] = c.cell_windows;
    j["cell_means"] = c.cell_means;
  }
  return j;
}

ordered_json to_json(const TableRow& row) {
  ordered_json j;
  j["config"] = to_json(row.config);
  j["rejection_rate"] = row.rejection_rate;
  j["monte_carlo_se"] = row.monte_carlo_se;
  j["p_value_histogram"] = row.p_value_histogram;
  return j;
}

ordered_json to_json(const ScreeningReport& report) {
  ordered_json j;
  j["alpha"] = report.alpha;
  j["tested"] = report.tested;
  j["bh_threshold_index"] = report.bh_threshold_index;
  j["rejected_set_ids"] = report.rejected_set_ids;
  ordered_json sets = ordered_json::array();
  for (const auto& s : report.sets) {
    ordered_json e;
    e["set_id"] = s.set_id;
    e["size"] = s.size;
    e["result"] = s.result ? to_json(*s.result) : ordered_json(nullptr);
    e["error"] = s.error.empty() ? ordered_json(nullptr) : ordered_json(s.error);
    e["rejected"] = s.rejected;
    sets.push_back(std::move(e));
  }
  j["sets"] = std::move(sets);
  return j;
}

SimulationConfig simulation_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidConfig, "simulation config must be a JSON object");
  SimulationConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "dgp") c.dgp = parse_dgp(v.get<std::string>());
      else if (key == "n") c.n = v.get<std::size_t>();
      else if (key == "p") c.p = v.get<std::size_t>();
      else if (key == "T") c.window = v.get<std::size_t>();
      else if (key == "error") c.error = parse_error_law(v.get<std::string>());
      else if (key == "beta") c.beta_mode = parse_beta_mode(v.get<std::string>());
      else if (key == "beta_norm") c.beta_norm = v.get<double>();
      else if (key == "tau") c.tau = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "joint") c.joint = v.get<bool>();
      else if (key == "replications") c.replications = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "alpha") c.alpha_levels = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      else if (key == "bootstrap") c.bootstrap_draws = v.get<std::size_t>();
      else if (key == "multiplier") c.multiplier = parse_multiplier(v.get<std::string>());
      else if (key == "covariates") c.factorial_covariates = parse_covariate_design(v.get<std::string>());
      else if (key == "cell_windows") c.cell_windows = v.get<std::vector<std::size_t>>();
      else if (key == "cell_means") c.cell_means = v.get<std::vector<double>>();
      else fail(ErrorKind::InvalidConfig, "unknown simulation config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidConfig, std::string("bad simulation config: ") + e.what());
  }
  return c;
}

}  // namespace mdd
