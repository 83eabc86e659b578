#include "mdd/bootstrap.hpp"

#include <cmath>
#include <string>

#include "mdd/error.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/quantile_test.hpp"

namespace mdd {

std::string_view to_string(Multiplier m) noexcept {
  return m == Multiplier::gaussian ? "gaussian" : "rademacher";
}

Multiplier parse_multiplier(std::string_view name) {
  if (name == "gaussian") return Multiplier::gaussian;
  if (name == "rademacher") return Multiplier::rademacher;
  fail(ErrorKind::InvalidConfig, "unknown multiplier '" + std::string(name) + "'");
}

void BootstrapPlan::validate() const {
  if (draws < 1) fail(ErrorKind::InvalidConfig, "bootstrap needs at least one draw");
}

std::vector<double> bootstrap_multipliers(const BootstrapPlan& plan, std::size_t draw_index, std::size_t n) {
  auto engine = make_engine(plan.seed, StreamTag::bootstrap, draw_index);
  std::vector<double> e(n);
  if (plan.multiplier == Multiplier::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : e) v = normal(engine);
  } else {
    for (double& v : e) v = (engine() >> 63) ? 1.0 : -1.0;
  }
  return e;
}

double bootstrap_statistic(const Matrix& d, std::span<const double> e) {
  const std::size_t n = d.rows();
  if (e.size() != n) fail(ErrorKind::InvalidData, "multiplier length does not match sample size");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = d.row(k);
    double lin = 0.0, sq = 0.0;
    for (std::size_t l = k + 1; l < n; ++l) {
      const double t = row[l] * e[l];
      lin += t;
      sq += t * t;
    }
    num += e[k] * lin;
    den += e[k] * e[k] * sq;
  }
  if (!(den > 0.0)) fail(ErrorKind::DegenerateDraw, "bootstrap studentizer is zero for this draw");
  return num / std::sqrt(den);
}

double bootstrap_p_value(const Matrix& d, double observed, const BootstrapPlan& plan, std::size_t& degenerate) {
  plan.validate();
  std::size_t exceed = 0;
  degenerate = 0;
  for (std::size_t b = 0; b < plan.draws; ++b) {
    const auto e = bootstrap_multipliers(plan, b, d.rows());
    try {
      if (bootstrap_statistic(d, e) >= observed) ++exceed;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::DegenerateDraw) throw;
      ++degenerate;
    }
  }
  return static_cast<double>(exceed) / static_cast<double>(plan.draws);
}

TestResult bootstrap_mean_test(const Matrix& x, std::span<const double> y, const BootstrapPlan& plan) {
  plan.validate();
  const auto parts = prepare_marginal(x, y);
  TestResult r = mean_result_from_parts(parts);
  r.calibration = Calibration::bootstrap;
  r.bootstrap_draws = plan.draws;
  r.p_value = bootstrap_p_value(parts.d, r.statistic, plan, r.degenerate_draws);
  return r;
}

TestResult bootstrap_quantile_test(const Matrix& x, std::span<const double> y, double tau,
                                   const BootstrapPlan& plan) {
  plan.validate();
  if (x.rows() != y.size()) fail(ErrorKind::InvalidData, "covariate and response row counts differ");
  const auto w = quantile_residuals(y, tau);
  const auto parts = prepare_marginal(x, half_squared_distance_matrix(w));
  TestResult r = quantile_result_from_parts(parts, tau, empirical_quantile(y, tau));
  r.calibration = Calibration::bootstrap;
  r.bootstrap_draws = plan.draws;
  r.p_value = bootstrap_p_value(parts.d, r.statistic, plan, r.degenerate_draws);
  return r;
}

}  // namespace mdd
