#include "mdd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mdd/error.hpp"
#include "mdd/factorial.hpp"
#include "mdd/io.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/quantile_test.hpp"
#include "mdd/screening.hpp"
#include "mdd/serialize.hpp"
#include "mdd/simulation.hpp"

namespace mdd {

namespace {

using nlohmann::ordered_json;

struct Common {
  std::size_t bootstrap = 0;
  std::string multiplier = "gaussian";
  std::uint64_t seed = 1;
  std::vector<double> alpha;
  std::string out_path;
  std::string format = "json";
  std::string delimiter = ",";
  std::size_t threads = 1;
};

struct DataArgs {
  std::string input;
  std::string response = "y";
};

const CLI::Validator kOpenUnit(
    [](std::string& s) {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return std::string("expected a number");
      }
      return v > 0.0 && v < 1.0 ? std::string() : std::string("must lie strictly between 0 and 1");
    },
    "in (0,1)", "OPEN_UNIT");

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--bootstrap", c.bootstrap, "Wild-bootstrap draws (0: normal calibration)");
  cmd->add_option("--multiplier", c.multiplier, "Bootstrap multipliers")
      ->check(CLI::IsMember({"gaussian", "rademacher"}));
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--alpha", c.alpha, "Significance level(s)")->check(kOpenUnit);
  cmd->add_option("--out", c.out_path, "Also write the JSON output to this path");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

void add_data(CLI::App* cmd, DataArgs& d, Common& c) {
  cmd->add_option("data", d.input, "Delimited data file with a header row")->required();
  cmd->add_option("--response", d.response, "Response column name or 0-based index");
  cmd->add_option("--delimiter", c.delimiter, "Field delimiter: ',', ';' or 'tab'");
}

char delimiter_char(const std::string& s) {
  if (s == "tab" || s == "\\t" || s == "\t") return '\t';
  if (s.size() == 1) return s[0];
  fail(ErrorKind::InvalidConfig, "delimiter must be a single character or 'tab'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string result_table(const TestResult& r) {
  std::ostringstream os;
  auto line = [&](const std::string& k, const std::string& v) { os << std::left << std::setw(20) << k << v << '\n'; };
  line("method", std::string(to_string(r.method)));
  line("calibration", std::string(to_string(r.calibration)));
  line("statistic", fmt(r.statistic));
  line("p_value", fmt(r.p_value));
  line("mdd_sum", fmt(r.mdd_sum));
  line("variance_estimate", fmt(r.variance_estimate));
  line("n", std::to_string(r.n));
  line("p", std::to_string(r.p));
  if (r.tau) line("tau", fmt(*r.tau));
  if (r.quantile_estimate) line("quantile_estimate", fmt(*r.quantile_estimate));
  if (r.calibration == Calibration::bootstrap) {
    line("bootstrap_draws", std::to_string(r.bootstrap_draws));
    line("degenerate_draws", std::to_string(r.degenerate_draws));
  }
  return os.str();
}

std::string screening_table(const ScreeningReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "set_id" << std::right << std::setw(6) << "size" << std::setw(14) << "statistic"
     << std::setw(14) << "p_value" << std::setw(10) << "rejected" << '\n';
  for (const auto& s : report.sets) {
    os << std::left << std::setw(24) << s.set_id << std::right << std::setw(6) << s.size;
    if (s.result) {
      os << std::setw(14) << fmt(s.result->statistic) << std::setw(14) << fmt(s.result->p_value) << std::setw(10)
         << (s.rejected ? "yes" : "no") << '\n';
    } else {
      os << "  error: " << s.error << '\n';
    }
  }
  os << "tested " << report.tested << ", BH index " << report.bh_threshold_index << ", rejected "
     << report.rejected_set_ids.size() << " at FDR " << fmt(report.alpha) << '\n';
  return os.str();
}

void emit(const Common& c, std::ostream& out, const std::string& json_text, const std::string& table_text) {
  out << (c.format == "table" ? table_text : json_text);
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path);
    if (!f) fail(ErrorKind::Io, "cannot write '" + c.out_path + "'");
    f << json_text;
    if (!f) fail(ErrorKind::Io, "write to '" + c.out_path + "' failed");
  }
}

ordered_json data_echo(const std::string& command, const DataArgs& d, const Dataset& data, const Common& c) {
  ordered_json j;
  j["command"] = command;
  j["input"] = d.input;
  j["response"] = data.response_name;
  j["delimiter"] = std::string(1, delimiter_char(c.delimiter));
  j["seed"] = c.seed;
  j["bootstrap"] = c.bootstrap;
  j["multiplier"] = c.multiplier;
  return j;
}

std::string with_decision(const TestResult& r, double alpha, ordered_json config) {
  ordered_json j = to_json(r);
  j["alpha"] = alpha;
  j["reject"] = r.p_value < alpha;
  j["config"] = std::move(config);
  return j.dump(2) + "\n";
}

Dataset load(const DataArgs& d, const Common& c) {
  Dataset data = read_dataset(d.input, d.response, delimiter_char(c.delimiter));
  data.validate();
  return data;
}

double single_alpha(const Common& c) {
  if (c.alpha.size() > 1) fail(ErrorKind::InvalidConfig, "this command takes a single --alpha");
  return c.alpha.empty() ? 0.05 : c.alpha.front();
}

int classify(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidQuantile: return kExitUsage;
    default: return kExitData;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Martingale difference divergence tests for high-dimensional conditional mean and quantile independence",
               "mdd"};
  app.require_subcommand(1);

  Common common;
  DataArgs data_args;
  bool joint = false;
  double tau = 0.5;
  std::vector<std::string> cell_cols;
  std::string sets_path;
  double fdr = 0.05;
  std::string screen_method = "mean";
  std::string config_path;
  SimulationConfig sim;
  std::string dgp = "ma_linear", error_law = "normal(0,4)", beta = "null", covariates = "moving_average";
  std::optional<double> sim_tau;

  auto* test = app.add_subcommand("test", "Conditional mean independence test");
  add_data(test, data_args, common);
  add_common(test, common);
  test->add_flag("--joint", joint, "Use the global statistic on all covariates jointly");

  auto* qtest = app.add_subcommand("qtest", "Conditional quantile independence test");
  add_data(qtest, data_args, common);
  add_common(qtest, common);
  qtest->add_option("--tau", tau, "Quantile level")->required()->check(kOpenUnit);

  auto* ftest = app.add_subcommand("ftest", "Factorial-design mean independence test");
  add_data(ftest, data_args, common);
  add_common(ftest, common);
  ftest->add_option("--cell-col", cell_cols, "Factor column name (give once or twice)")->required()->expected(1, 2);

  auto* screen = app.add_subcommand("screen", "Gene-set screening with BH false discovery rate control");
  add_data(screen, data_args, common);
  add_common(screen, common);
  screen->add_option("--sets", sets_path, "TSV: set_id<TAB>comma-separated column names")->required();
  screen->add_option("--fdr", fdr, "False discovery rate level")->check(kOpenUnit);
  screen->add_option("--method", screen_method, "Per-set test")->check(CLI::IsMember({"mean", "quantile"}));
  screen->add_option("--tau", tau, "Quantile level for --method quantile")->check(kOpenUnit);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power for a simulation design");
  add_common(simulate, common);
  auto* config_opt = simulate->add_option("--config", config_path, "JSON config (object or array of objects)");
  std::vector<CLI::Option*> flags;
  flags.push_back(simulate->add_option("--dgp", dgp, "Data-generating process"));
  flags.push_back(simulate->add_option("--n", sim.n, "Sample size (per cell for factorial designs)"));
  flags.push_back(simulate->add_option("--p", sim.p, "Number of covariates"));
  flags.push_back(simulate->add_option("--T", sim.window, "Moving-average window"));
  flags.push_back(simulate->add_option("--reps", sim.replications, "Replications"));
  flags.push_back(simulate->add_option("--error", error_law, "Error law, e.g. normal(0,4), t(3), gamma(1,0.5)"));
  flags.push_back(simulate->add_option("--beta", beta, "null, dense, sparse, dense_unit or sparse_unit"));
  flags.push_back(simulate->add_option("--beta-norm", sim.beta_norm, "Euclidean norm of beta (dense/sparse)"));
  flags.push_back(simulate->add_option("--tau", sim_tau, "Run the quantile test at this level")->check(kOpenUnit));
  flags.push_back(simulate->add_flag("--joint", sim.joint, "Use the global statistic"));
  flags.push_back(simulate->add_option("--covariates", covariates, "Factorial nonlinear design: ma or cs"));
  for (auto* f : flags) config_opt->excludes(f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Multiplier multiplier = parse_multiplier(common.multiplier);
    if (test->parsed() || qtest->parsed()) {
      const double alpha = single_alpha(common);
      if (joint && common.bootstrap > 0) fail(ErrorKind::InvalidConfig, "--joint uses normal calibration only");
      const Dataset data = load(data_args, common);
      ScreeningOptions options;
      options.method = qtest->parsed() ? ScreenMethod::quantile : ScreenMethod::mean;
      options.tau = tau;
      options.bootstrap_draws = common.bootstrap;
      options.multiplier = multiplier;
      options.seed = common.seed;
      options.validate();
      std::vector<std::size_t> all(data.p());
      for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
      const TestResult r = joint ? joint_mdd_test(data.x, data.y) : run_set_test(data, all, options, 0);
      auto echo = data_echo(qtest->parsed() ? "qtest" : "test", data_args, data, common);
      if (test->parsed()) echo["joint"] = joint;
      if (qtest->parsed()) echo["tau"] = tau;
      emit(common, out, with_decision(r, alpha, std::move(echo)), result_table(r));
      return kExitOk;
    }

    if (ftest->parsed()) {
      const double alpha = single_alpha(common);
      if (common.bootstrap > 0) fail(ErrorKind::InvalidConfig, "ftest uses normal calibration only");
      const Dataset data = load(data_args, common);
      std::vector<std::size_t> factor_cols;
      for (const auto& name : cell_cols) {
        const auto it = std::find(data.column_names.begin(), data.column_names.end(), name);
        if (it == data.column_names.end()) fail(ErrorKind::UnknownColumn, "cell column '" + name + "' not found");
        factor_cols.push_back(static_cast<std::size_t>(it - data.column_names.begin()));
      }
      const TestResult r = factorial_mean_test(partition_by_factors(data, factor_cols));
      auto echo = data_echo("ftest", data_args, data, common);
      echo["cell_cols"] = cell_cols;
      emit(common, out, with_decision(r, alpha, std::move(echo)), result_table(r));
      return kExitOk;
    }

    if (screen->parsed()) {
      if (!common.alpha.empty()) fail(ErrorKind::InvalidConfig, "screen takes its level from --fdr");
      const Dataset data = load(data_args, common);
      const auto sets = read_gene_sets(sets_path, data);
      ScreeningOptions options;
      options.method = screen_method == "quantile" ? ScreenMethod::quantile : ScreenMethod::mean;
      options.tau = tau;
      options.bootstrap_draws = common.bootstrap;
      options.multiplier = multiplier;
      options.seed = common.seed;
      options.alpha = fdr;
      options.threads = common.threads;
      const auto report = screen_gene_sets(data, sets, options);
      auto j = to_json(report);
      auto echo = data_echo("screen", data_args, data, common);
      echo["sets"] = sets_path;
      echo["method"] = screen_method;
      if (options.method == ScreenMethod::quantile) echo["tau"] = tau;
      j["config"] = std::move(echo);
      for (const auto& s : report.sets) {
        if (!s.error.empty()) err << "warning: set '" << s.set_id << "' excluded: " << s.error << '\n';
      }
      emit(common, out, j.dump(2) + "\n", screening_table(report));
      return kExitOk;
    }

    // simulate
    std::vector<SimulationConfig> configs;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) fail(ErrorKind::Io, "cannot open '" + config_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
      }
      if (j.is_array()) {
        for (const auto& item : j) configs.push_back(simulation_config_from_json(item));
      } else {
        configs.push_back(simulation_config_from_json(j));
      }
    } else {
      sim.dgp = parse_dgp(dgp);
      sim.error = parse_error_law(error_law);
      sim.beta_mode = parse_beta_mode(beta);
      sim.factorial_covariates = parse_covariate_design(covariates);
      sim.tau = sim_tau;
      configs.push_back(sim);
    }
    for (auto& c : configs) {
      if (simulate->count("--seed")) c.seed = common.seed;
      if (!common.alpha.empty()) c.alpha_levels = common.alpha;
      if (simulate->count("--bootstrap")) c.bootstrap_draws = common.bootstrap;
      if (simulate->count("--multiplier")) c.multiplier = multiplier;
      c.validate();
    }
    std::vector<TableRow> rows;
    std::string json_lines;
    for (const auto& c : configs) {
      rows.push_back(monte_carlo_table(c, common.threads));
      json_lines += to_json(rows.back()).dump() + "\n";
    }
    emit(common, out, json_lines, format_table(rows));
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace mdd
