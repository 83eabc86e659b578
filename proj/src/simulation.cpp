#include "mdd/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "mdd/error.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/quantile_test.hpp"

namespace mdd {

std::string_view to_string(Dgp d) noexcept {
  switch (d) {
    case Dgp::ma_linear: return "ma_linear";
    case Dgp::cs_linear: return "cs_linear";
    case Dgp::cs_sqrt_quadratic: return "cs_sqrt_quadratic";
    case Dgp::cs_inv_sqrt_quadratic: return "cs_inv_sqrt_quadratic";
    case Dgp::mixture_gamma: return "mixture_gamma";
    case Dgp::cs_heteroscedastic_squared: return "cs_heteroscedastic_squared";
    case Dgp::cs_linear_heteroscedastic: return "cs_linear_heteroscedastic";
    case Dgp::factorial_ma_linear: return "factorial_ma_linear";
    case Dgp::factorial_nonlinear: return "factorial_nonlinear";
  }
  return "unknown";
}

std::string_view to_string(BetaMode m) noexcept {
  switch (m) {
    case BetaMode::null: return "null";
    case BetaMode::dense: return "dense";
    case BetaMode::sparse: return "sparse";
    case BetaMode::dense_unit: return "dense_unit";
    case BetaMode::sparse_unit: return "sparse_unit";
  }
  return "unknown";
}

std::string_view to_string(CovariateDesign c) noexcept {
  return c == CovariateDesign::moving_average ? "moving_average" : "compound_symmetry";
}

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double parse_double(std::string_view s, std::string_view context) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorKind::InvalidConfig, "cannot parse number '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

}  // namespace

std::string to_string(const ErrorLaw& e) {
  switch (e.family) {
    case ErrorFamily::normal: return "normal(" + format_number(e.first) + "," + format_number(e.second) + ")";
    case ErrorFamily::student_t: return "t(" + format_number(e.first) + ")";
    case ErrorFamily::chi_sq_centered: return "chisq(" + format_number(e.first) + ")";
    case ErrorFamily::cauchy: return "cauchy(" + format_number(e.first) + "," + format_number(e.second) + ")";
    case ErrorFamily::gamma_centered: return "gamma(" + format_number(e.first) + "," + format_number(e.second) + ")";
  }
  return "unknown";
}

Dgp parse_dgp(std::string_view s) {
  for (Dgp d : {Dgp::ma_linear, Dgp::cs_linear, Dgp::cs_sqrt_quadratic, Dgp::cs_inv_sqrt_quadratic,
                Dgp::mixture_gamma, Dgp::cs_heteroscedastic_squared, Dgp::cs_linear_heteroscedastic,
                Dgp::factorial_ma_linear, Dgp::factorial_nonlinear}) {
    if (to_string(d) == s) return d;
  }
  fail(ErrorKind::InvalidConfig, "unknown dgp '" + std::string(s) + "'");
}

BetaMode parse_beta_mode(std::string_view s) {
  for (BetaMode m : {BetaMode::null, BetaMode::dense, BetaMode::sparse, BetaMode::dense_unit, BetaMode::sparse_unit}) {
    if (to_string(m) == s) return m;
  }
  fail(ErrorKind::InvalidConfig, "unknown beta mode '" + std::string(s) + "'");
}

CovariateDesign parse_covariate_design(std::string_view s) {
  if (s == "moving_average" || s == "ma") return CovariateDesign::moving_average;
  if (s == "compound_symmetry" || s == "cs") return CovariateDesign::compound_symmetry;
  fail(ErrorKind::InvalidConfig, "unknown covariate design '" + std::string(s) + "'");
}

ErrorLaw parse_error_law(std::string_view s) {
  const auto open = s.find('(');
  const std::string_view name = s.substr(0, open);
  std::vector<double> args;
  if (open != std::string_view::npos) {
    if (s.back() != ')') fail(ErrorKind::InvalidConfig, "malformed error law '" + std::string(s) + "'");
    std::string_view inner = s.substr(open + 1, s.size() - open - 2);
    while (!inner.empty()) {
      const auto comma = inner.find(',');
      args.push_back(parse_double(inner.substr(0, comma), s));
      if (comma == std::string_view::npos) break;
      inner.remove_prefix(comma + 1);
    }
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      fail(ErrorKind::InvalidConfig, "error law '" + std::string(s) + "' expects " + std::to_string(k) + " argument(s)");
    }
  };
  ErrorLaw law;
  if (name == "normal") {
    need(2);
    law = {ErrorFamily::normal, args[0], args[1]};
    if (!(law.second > 0.0)) fail(ErrorKind::InvalidConfig, "normal variance must be positive");
  } else if (name == "t" || name == "student_t") {
    need(1);
    law = {ErrorFamily::student_t, args[0], 0.0};
  } else if (name == "chisq" || name == "chi_sq_centered") {
    need(1);
    law = {ErrorFamily::chi_sq_centered, args[0], 0.0};
  } else if (name == "cauchy") {
    if (args.empty()) args = {0.0, 1.0};
    need(2);
    law = {ErrorFamily::cauchy, args[0], args[1]};
  } else if (name == "gamma" || name == "gamma_centered") {
    need(2);
    law = {ErrorFamily::gamma_centered, args[0], args[1]};
  } else {
    fail(ErrorKind::InvalidConfig, "unknown error law '" + std::string(s) + "'");
  }
  if (law.family != ErrorFamily::normal && law.family != ErrorFamily::cauchy && !(law.first > 0.0)) {
    fail(ErrorKind::InvalidConfig, "error law parameter must be positive in '" + std::string(s) + "'");
  }
  if ((law.family == ErrorFamily::cauchy || law.family == ErrorFamily::gamma_centered) && !(law.second > 0.0)) {
    fail(ErrorKind::InvalidConfig, "scale must be positive in '" + std::string(s) + "'");
  }
  return law;
}

bool is_factorial(Dgp d) noexcept { return d == Dgp::factorial_ma_linear || d == Dgp::factorial_nonlinear; }

void SimulationConfig::validate() const {
  if (n < 4) fail(ErrorKind::InvalidConfig, "n must be >= 4");
  if (p < 1) fail(ErrorKind::InvalidConfig, "p must be >= 1");
  if (replications < 1) fail(ErrorKind::InvalidConfig, "replications must be >= 1");
  if (window < 1) fail(ErrorKind::InvalidConfig, "moving-average window T must be >= 1");
  if (alpha_levels.empty()) fail(ErrorKind::InvalidConfig, "at least one alpha level is required");
  for (double a : alpha_levels) {
    if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::InvalidConfig, "alpha levels must lie in (0, 1)");
  }
  if (tau && !(*tau > 0.0 && *tau < 1.0)) fail(ErrorKind::InvalidQuantile, "tau must lie in (0, 1)");
  if ((beta_mode == BetaMode::sparse || beta_mode == BetaMode::sparse_unit) && p < 5) {
    fail(ErrorKind::InvalidConfig, "sparse beta needs p >= 5");
  }
  if (beta_mode == BetaMode::dense && p < 2) fail(ErrorKind::InvalidConfig, "dense beta needs p >= 2");
  if (dgp == Dgp::cs_inv_sqrt_quadratic && beta_mode == BetaMode::null) {
    fail(ErrorKind::InvalidConfig, "cs_inv_sqrt_quadratic is undefined for a zero beta");
  }
  if (is_factorial(dgp)) {
    if (tau || joint) fail(ErrorKind::InvalidConfig, "factorial designs run the mean test only");
    if (bootstrap_draws > 0) fail(ErrorKind::InvalidConfig, "factorial designs use normal calibration");
    if (cell_means.size() != cell_windows.size() || cell_means.empty()) {
      fail(ErrorKind::InvalidConfig, "cell_means and cell_windows must have the same nonzero length");
    }
    for (std::size_t w : cell_windows) {
      if (w < 1) fail(ErrorKind::InvalidConfig, "cell windows must be >= 1");
    }
  }
  if (joint && tau) fail(ErrorKind::InvalidConfig, "joint statistic is a mean test; drop tau");
  if (joint && bootstrap_draws > 0) fail(ErrorKind::InvalidConfig, "joint statistic uses normal calibration");
}

MaDesign draw_ma_design(std::size_t p, std::size_t window, Engine& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> shift(2.0, 3.0);
  MaDesign design;
  design.alpha.resize(window);
  design.mu.resize(p);
  for (double& a : design.alpha) a = unit(engine);
  for (double& m : design.mu) m = shift(engine);
  return design;
}

Matrix gen_moving_average_covariates(std::size_t n, const MaDesign& design, Engine& engine) {
  const std::size_t p = design.mu.size();
  const std::size_t window = design.alpha.size();
  if (window < 1) fail(ErrorKind::InvalidConfig, "moving-average window T must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, p);
  std::vector<double> z(p + window - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : z) v = normal(engine);
    for (std::size_t j = 0; j < p; ++j) {
      double acc = design.mu[j];
      for (std::size_t k = 0; k < window; ++k) acc += design.alpha[k] * z[j + k];
      x(i, j) = acc;
    }
  }
  return x;
}

Matrix gen_moving_average_covariates(std::size_t n, std::size_t p, std::size_t window, std::uint64_t seed) {
  auto fixed = make_engine(seed, StreamTag::fixed_design, 0);
  const auto design = draw_ma_design(p, window, fixed);
  auto engine = make_engine(seed, StreamTag::replication, 0);
  return gen_moving_average_covariates(n, design, engine);
}

Matrix gen_compound_symmetry_covariates(std::size_t n, std::size_t p, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const double common = normal(engine);
    for (std::size_t j = 0; j < p; ++j) x(i, j) = (normal(engine) + common) / std::numbers::sqrt2;
  }
  return x;
}

Matrix gen_compound_symmetry_covariates(std::size_t n, std::size_t p, std::uint64_t seed) {
  auto engine = make_engine(seed, StreamTag::replication, 0);
  return gen_compound_symmetry_covariates(n, p, engine);
}

std::vector<double> make_beta(BetaMode mode, std::size_t p, double beta_norm, std::size_t n) {
  std::vector<double> beta(p, 0.0);
  auto fill = [&](std::size_t count, double value) {
    for (std::size_t j = 0; j < std::min(count, p); ++j) beta[j] = value;
  };
  switch (mode) {
    case BetaMode::null: break;
    case BetaMode::dense: {
      const std::size_t k = p / 2;
      if (k == 0) fail(ErrorKind::InvalidConfig, "dense beta needs p >= 2");
      fill(k, beta_norm / std::sqrt(static_cast<double>(k)));
      break;
    }
    case BetaMode::sparse:
      if (p < 5) fail(ErrorKind::InvalidConfig, "sparse beta needs p >= 5");
      fill(5, beta_norm / std::sqrt(5.0));
      break;
    case BetaMode::dense_unit: fill(n / 2, 1.0); break;
    case BetaMode::sparse_unit:
      if (p < 5) fail(ErrorKind::InvalidConfig, "sparse beta needs p >= 5");
      fill(5, 1.0);
      break;
  }
  return beta;
}

double draw_error(const ErrorLaw& law, Engine& engine) {
  switch (law.family) {
    case ErrorFamily::normal: return std::normal_distribution<double>(law.first, std::sqrt(law.second))(engine);
    case ErrorFamily::student_t: return std::student_t_distribution<double>(law.first)(engine);
    case ErrorFamily::chi_sq_centered: return std::chi_squared_distribution<double>(law.first)(engine) - law.first;
    case ErrorFamily::cauchy: return std::cauchy_distribution<double>(law.first, law.second)(engine);
    case ErrorFamily::gamma_centered:
      return std::gamma_distribution<double>(law.first, law.second)(engine) - law.first * law.second;
  }
  return 0.0;
}

namespace {

double linear_index(const Matrix& x, std::size_t i, std::span<const double> beta) {
  double s = 0.0;
  const auto row = x.row(i);
  for (std::size_t j = 0; j < beta.size(); ++j) s += row[j] * beta[j];
  return s;
}

double weighted_square_sum(const Matrix& x, std::size_t i, std::span<const double> beta) {
  double s = 0.0;
  const auto row = x.row(i);
  for (std::size_t j = 0; j < beta.size(); ++j) s += beta[j] * row[j] * row[j];
  return s;
}

}  // namespace

std::vector<double> gen_response(Dgp dgp, const Matrix& x, std::span<const double> beta, const ErrorLaw& error,
                                 Engine& engine) {
  if (beta.size() != x.cols()) fail(ErrorKind::InvalidConfig, "beta length does not match covariate count");
  const std::size_t n = x.rows();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = draw_error(error, engine);
    switch (dgp) {
      case Dgp::ma_linear:
      case Dgp::cs_linear: y[i] = linear_index(x, i, beta) + e; break;
      case Dgp::cs_sqrt_quadratic: y[i] = std::sqrt(weighted_square_sum(x, i, beta)) + e; break;
      case Dgp::cs_inv_sqrt_quadratic: {
        const double q = weighted_square_sum(x, i, beta);
        if (!(q > 0.0)) fail(ErrorKind::InvalidConfig, "cs_inv_sqrt_quadratic needs a nonzero signal");
        y[i] = static_cast<double>(x.cols()) / std::sqrt(q) + e;
        break;
      }
      case Dgp::cs_heteroscedastic_squared: {
        const double s = 1.0 + linear_index(x, i, beta);
        y[i] = s * s * e;
        break;
      }
      case Dgp::cs_linear_heteroscedastic: {
        const double lin = linear_index(x, i, beta);
        y[i] = lin + (1.0 + lin) * (1.0 + lin) * e;
        break;
      }
      case Dgp::mixture_gamma:
      case Dgp::factorial_ma_linear:
      case Dgp::factorial_nonlinear:
        fail(ErrorKind::InvalidConfig, "gen_response does not handle dgp " + std::string(to_string(dgp)));
    }
  }
  return y;
}

std::vector<double> gen_response(Dgp dgp, const Matrix& x, std::span<const double> beta, const ErrorLaw& error,
                                 std::uint64_t seed) {
  auto engine = make_engine(seed, StreamTag::replication, 0);
  return gen_response(dgp, x, beta, error, engine);
}

Dataset gen_mixture(std::size_t n, std::size_t p, std::span<const double> beta, Engine& engine) {
  if (p < 1) fail(ErrorKind::InvalidConfig, "mixture needs p >= 1");
  if (beta.size() != p) fail(ErrorKind::InvalidConfig, "beta length does not match p");
  std::gamma_distribution<double> covariate(6.0, 1.0);
  std::gamma_distribution<double> upper(2.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  Dataset data;
  data.x = Matrix(n, p);
  data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) data.x(i, j) = covariate(engine);
    const bool eps = coin(engine);
    const double z = upper(engine);
    data.y[i] = eps ? 1.0 + z : -(1.0 + linear_index(data.x, i, beta));
  }
  return data;
}

Dataset gen_mixture(std::size_t n, std::size_t p, std::span<const double> beta, std::uint64_t seed) {
  auto engine = make_engine(seed, StreamTag::replication, 0);
  return gen_mixture(n, p, beta, engine);
}

Dataset simulate_dataset(const SimulationConfig& config, std::size_t replication) {
  if (is_factorial(config.dgp)) fail(ErrorKind::InvalidConfig, "use simulate_cells for factorial designs");
  const auto beta = make_beta(config.beta_mode, config.p, config.beta_norm, config.n);
  auto engine = make_engine(config.seed, StreamTag::replication, replication);
  if (config.dgp == Dgp::mixture_gamma) return gen_mixture(config.n, config.p, beta, engine);

  Dataset data;
  if (config.dgp == Dgp::ma_linear) {
    auto fixed = make_engine(config.seed, StreamTag::fixed_design, 0);
    const auto design = draw_ma_design(config.p, config.window, fixed);
    data.x = gen_moving_average_covariates(config.n, design, engine);
  } else {
    data.x = gen_compound_symmetry_covariates(config.n, config.p, engine);
  }
  data.y = gen_response(config.dgp, data.x, beta, config.error, engine);
  return data;
}

CellTable simulate_cells(const SimulationConfig& config, std::size_t replication) {
  if (!is_factorial(config.dgp)) fail(ErrorKind::InvalidConfig, "simulate_cells needs a factorial dgp");
  const auto beta = make_beta(config.beta_mode, config.p, config.beta_norm, config.n);
  auto engine = make_engine(config.seed, StreamTag::replication, replication);
  CellTable table;
  const std::size_t cells = config.cell_windows.size();
  table.levels_a = cells == 4 ? 2 : cells;
  table.levels_b = cells == 4 ? 2 : 1;
  for (std::size_t c = 0; c < cells; ++c) {
    Cell cell;
    cell.level_a = cells == 4 ? c / 2 : c;
    cell.level_b = cells == 4 ? c % 2 : 0;
    cell.label = "(" + std::to_string(cell.level_a + 1) + "," + std::to_string(cell.level_b + 1) + ")";
    const bool ma = config.dgp == Dgp::factorial_ma_linear ||
                    config.factorial_covariates == CovariateDesign::moving_average;
    if (ma) {
      auto fixed = make_engine(config.seed, StreamTag::fixed_design, c + 1);
      const auto design = draw_ma_design(config.p, config.cell_windows[c], fixed);
      cell.data.x = gen_moving_average_covariates(config.n, design, engine);
    } else {
      cell.data.x = gen_compound_symmetry_covariates(config.n, config.p, engine);
    }
    const Dgp inner = config.dgp == Dgp::factorial_ma_linear ? Dgp::ma_linear : Dgp::cs_sqrt_quadratic;
    cell.data.y = gen_response(inner, cell.data.x, beta, config.error, engine);
    for (double& v : cell.data.y) v += config.cell_means[c];
    table.cells.push_back(std::move(cell));
  }
  return table;
}

TestResult run_replication(const SimulationConfig& config, std::size_t replication) {
  if (is_factorial(config.dgp)) return factorial_mean_test(simulate_cells(config, replication));
  const Dataset data = simulate_dataset(config, replication);
  if (config.joint) return joint_mdd_test(data.x, data.y);
  if (config.bootstrap_draws > 0) {
    BootstrapPlan plan{config.bootstrap_draws, config.multiplier,
                       derive_seed(config.seed, StreamTag::bootstrap, replication)};
    return config.tau ? bootstrap_quantile_test(data.x, data.y, *config.tau, plan)
                      : bootstrap_mean_test(data.x, data.y, plan);
  }
  return config.tau ? quantile_independence_test(data.x, data.y, *config.tau)
                    : mean_independence_test(data.x, data.y);
}

TableRow monte_carlo_table(const SimulationConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t reps = config.replications;
  std::vector<double> p_values(reps, 1.0);
  std::vector<std::exception_ptr> errors(reps);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        p_values[r] = run_replication(config, r).p_value;
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, reps);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  for (std::size_t r = 0; r < reps; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const Error& e) {
      fail(e.kind(), "replication " + std::to_string(r) + ": " + e.what());
    }
  }

  TableRow row;
  row.config = config;
  row.p_value_histogram.assign(kHistogramBins, 0);
  for (double pv : p_values) {
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(pv * kHistogramBins), kHistogramBins - 1);
    ++row.p_value_histogram[bin];
  }
  for (double alpha : config.alpha_levels) {
    const auto rejected = std::count_if(p_values.begin(), p_values.end(), [&](double pv) { return pv < alpha; });
    const double rate = static_cast<double>(rejected) / static_cast<double>(reps);
    row.rejection_rate.push_back(rate);
    row.monte_carlo_se.push_back(std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps)));
  }
  return row;
}

std::string format_table(std::span<const TableRow> rows) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "dgp" << std::right << std::setw(4) << "T" << std::setw(12) << "case"
     << std::setw(6) << "n" << std::setw(6) << "p" << std::setw(7) << "tau" << std::setw(6) << "cal";
  if (!rows.empty()) {
    for (double a : rows.front().config.alpha_levels) {
      std::ostringstream label;
      label << a * 100.0 << "%";
      os << std::setw(9) << label.str();
    }
  }
  os << '\n';
  for (const auto& row : rows) {
    const auto& c = row.config;
    const bool uses_window = c.dgp == Dgp::ma_linear || c.dgp == Dgp::factorial_ma_linear ||
                             (c.dgp == Dgp::factorial_nonlinear && c.factorial_covariates == CovariateDesign::moving_average);
    os << std::left << std::setw(28) << to_string(c.dgp) << std::right << std::setw(4)
       << (uses_window ? std::to_string(c.window) : std::string("-")) << std::setw(12)
       << (c.beta_mode == BetaMode::null ? std::string("H0") : std::string(to_string(c.beta_mode))) << std::setw(6)
       << c.n << std::setw(6) << c.p << std::setw(7) << (c.tau ? format_number(*c.tau) : std::string("-"))
       << std::setw(6) << (c.bootstrap_draws > 0 ? "boot" : "norm");
    os << std::fixed << std::setprecision(3);
    for (double rate : row.rejection_rate) os << std::setw(9) << rate;
    os.unsetf(std::ios::fixed);
    os << std::setprecision(6) << '\n';
  }
  return os.str();
}

}  // namespace mdd
