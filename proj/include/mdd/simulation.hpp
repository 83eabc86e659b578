#pragma once

// Data-generating processes and the Monte Carlo driver used to reproduce
// size/power tables. Every draw is a deterministic function of the config
// seed: replication r reads only from stream (seed, replication, r), and the
// design constants of the moving-average model from a separate fixed stream.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdd/bootstrap.hpp"
#include "mdd/factorial.hpp"
#include "mdd/matrix.hpp"
#include "mdd/rng.hpp"
#include "mdd/test_result.hpp"

namespace mdd {

enum class Dgp {
  ma_linear,                   // Y = X'b + e, moving-average covariates
  cs_linear,                   // Y = X'b + e, compound-symmetry covariates
  cs_sqrt_quadratic,           // Y = sqrt(sum_j b_j x_j^2) + e
  cs_inv_sqrt_quadratic,       // Y = p / sqrt(sum_j b_j x_j^2) + e
  mixture_gamma,               // Y = (1 + Z) eps - (1 + X'b)(1 - eps), Gamma covariates
  cs_heteroscedastic_squared,  // Y = (1 + X'b)^2 e
  cs_linear_heteroscedastic,   // Y = X'b + (1 + X'b)^2 e
  factorial_ma_linear,         // four cells, Y = mu_ij + X'b + e, MA covariates
  factorial_nonlinear,         // four cells, Y = mu_ij + sqrt(sum_h b_h x_h^2) + e
};

enum class ErrorFamily { normal, student_t, chi_sq_centered, cauchy, gamma_centered };

/// normal(mean, variance), student_t(df), chi_sq_centered(df),
/// cauchy(location, scale), gamma_centered(shape, scale).
struct ErrorLaw {
  ErrorFamily family = ErrorFamily::normal;
  double first = 0.0;
  double second = 1.0;
};

enum class BetaMode {
  null,         // all zero
  dense,        // first floor(p/2) entries equal, Euclidean norm = beta_norm
  sparse,       // first 5 entries equal, Euclidean norm = beta_norm
  dense_unit,   // indicator of the first floor(n/2) coordinates (capped at p)
  sparse_unit,  // indicator of the first 5 coordinates
};

enum class CovariateDesign { moving_average, compound_symmetry };

std::string_view to_string(Dgp d) noexcept;
std::string_view to_string(BetaMode m) noexcept;
std::string_view to_string(CovariateDesign c) noexcept;
std::string to_string(const ErrorLaw& e);
Dgp parse_dgp(std::string_view s);
BetaMode parse_beta_mode(std::string_view s);
CovariateDesign parse_covariate_design(std::string_view s);
/// Accepts "normal(mu,var)", "t(df)", "chisq(df)", "cauchy" or "cauchy(loc,scale)",
/// "gamma(shape,scale)".
ErrorLaw parse_error_law(std::string_view s);

bool is_factorial(Dgp d) noexcept;

struct SimulationConfig {
  Dgp dgp = Dgp::ma_linear;
  std::size_t n = 40;
  std::size_t p = 34;
  std::size_t window = 10;  // MA window T
  ErrorLaw error{ErrorFamily::normal, 0.0, 4.0};
  BetaMode beta_mode = BetaMode::null;
  double beta_norm = 0.06;
  std::optional<double> tau;  // set: quantile test at this level
  bool joint = false;         // use the global statistic instead of the marginal one
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  std::vector<double> alpha_levels{0.05, 0.10};
  std::size_t bootstrap_draws = 0;  // 0: normal calibration
  Multiplier multiplier = Multiplier::gaussian;
  // Factorial designs only.
  CovariateDesign factorial_covariates = CovariateDesign::moving_average;
  std::vector<std::size_t> cell_windows{10, 15, 20, 25};
  std::vector<double> cell_means{1.0, 3.0, 3.0, 4.0};

  void validate() const;
};

struct TableRow {
  SimulationConfig config;
  std::vector<double> rejection_rate;  // one per alpha level
  std::vector<double> monte_carlo_se;  // sqrt(r (1 - r) / R)
  std::vector<std::size_t> p_value_histogram;  // kHistogramBins equal-width bins on [0, 1]
};

inline constexpr std::size_t kHistogramBins = 20;

/// Moving-average design constants: alpha_k ~ U(0,1), mu_j ~ U(2,3).
struct MaDesign {
  std::vector<double> alpha;
  std::vector<double> mu;
};

MaDesign draw_ma_design(std::size_t p, std::size_t window, Engine& engine);

/// x_ij = sum_k alpha_k z_{i,j+k-1} + mu_j with z_i ~ N(0, I_{p+T-1}).
Matrix gen_moving_average_covariates(std::size_t n, const MaDesign& design, Engine& engine);
/// Design constants from the fixed stream of `seed`, innovations from its first replication stream.
Matrix gen_moving_average_covariates(std::size_t n, std::size_t p, std::size_t window, std::uint64_t seed);

/// x_ij = (s_ij + s_i0) / sqrt(2), s ~ N(0, I_{p+1}).
Matrix gen_compound_symmetry_covariates(std::size_t n, std::size_t p, Engine& engine);
Matrix gen_compound_symmetry_covariates(std::size_t n, std::size_t p, std::uint64_t seed);

/// `scale` is the target Euclidean norm for dense/sparse and the sample size n
/// (for floor(n/2)) in dense_unit mode; ignored otherwise.
std::vector<double> make_beta(BetaMode mode, std::size_t p, double beta_norm, std::size_t n);

double draw_error(const ErrorLaw& law, Engine& engine);

/// Response for the non-mixture models. Throws InvalidConfig for the mixture
/// and factorial DGPs and for the inverse-sqrt model with a zero signal.
std::vector<double> gen_response(Dgp dgp, const Matrix& x, std::span<const double> beta, const ErrorLaw& error,
                                 Engine& engine);
std::vector<double> gen_response(Dgp dgp, const Matrix& x, std::span<const double> beta, const ErrorLaw& error,
                                 std::uint64_t seed);

/// Mixture model: eps ~ Bernoulli(0.5), Z ~ Gamma(shape 2, scale 2),
/// X_ij ~ Gamma(shape 6, scale 1), Y = (1 + Z) eps - (1 + X'b)(1 - eps).
Dataset gen_mixture(std::size_t n, std::size_t p, std::span<const double> beta, Engine& engine);
Dataset gen_mixture(std::size_t n, std::size_t p, std::span<const double> beta, std::uint64_t seed);

/// Dataset for replication `r` of `config` (non-factorial DGPs).
Dataset simulate_dataset(const SimulationConfig& config, std::size_t replication);

/// Cell table for replication `r` of a factorial DGP: cell c uses MA window
/// cell_windows[c] (or compound-symmetry covariates) and mean shift cell_means[c].
CellTable simulate_cells(const SimulationConfig& config, std::size_t replication);

/// Test outcome for replication `r`.
TestResult run_replication(const SimulationConfig& config, std::size_t replication);

/// Runs every replication (optionally on `threads` workers; results do not
/// depend on the thread count) and aggregates rejection rates at each level.
/// A failing replication is rethrown with its index in the message.
TableRow monte_carlo_table(const SimulationConfig& config, std::size_t threads = 1);

/// Aligned text rendering: dgp, T, case, n, p, tau, then one column per level.
std::string format_table(std::span<const TableRow> rows);

}  // namespace mdd
