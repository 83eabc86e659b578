#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mdd/matrix.hpp"
#include "mdd/rng.hpp"
#include "mdd/test_result.hpp"

namespace mdd {

enum class Multiplier { gaussian, rademacher };

std::string_view to_string(Multiplier m) noexcept;
/// Throws InvalidConfig for anything but "gaussian" / "rademacher".
Multiplier parse_multiplier(std::string_view name);

/// Wild-bootstrap settings. Draw b uses its own stream derived from
/// (seed, b), so results do not depend on evaluation order.
struct BootstrapPlan {
  std::size_t draws = 500;
  Multiplier multiplier = Multiplier::gaussian;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Multipliers e_1..e_n for draw `draw_index` of `plan`.
std::vector<double> bootstrap_multipliers(const BootstrapPlan& plan, std::size_t draw_index, std::size_t n);

/// Studentized bootstrap statistic for one multiplier vector:
///   T* = sum_{k<l} d_kl e_k e_l / sqrt(sum_{k<l} d_kl^2 e_k^2 e_l^2),
/// where d is the symmetric pair-product matrix S_kl B_kl. The sqrt(C(n,2))
/// and 2/(n(n-1)) normalizations of MDD* and S*^2 cancel.
/// Throws DegenerateDraw if the denominator vanishes.
double bootstrap_statistic(const Matrix& d, std::span<const double> e);

/// Fraction of draws with T* >= observed. Degenerate draws count as
/// non-exceedances and are tallied in `degenerate`.
double bootstrap_p_value(const Matrix& d, double observed, const BootstrapPlan& plan, std::size_t& degenerate);

/// Mean test with p-value (1/B) sum_b 1{T*(b) >= T_n}. `statistic` carries T_n.
TestResult bootstrap_mean_test(const Matrix& x, std::span<const double> y, const BootstrapPlan& plan);

/// Quantile test calibrated by the same wild bootstrap on S_kl * B_Q,kl.
TestResult bootstrap_quantile_test(const Matrix& x, std::span<const double> y, double tau,
                                   const BootstrapPlan& plan);

}  // namespace mdd
