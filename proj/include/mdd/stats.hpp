#pragma once

#include <cstddef>
#include <span>

namespace mdd::stats {

/// P(Z >= z) for Z ~ N(0, 1).
double normal_upper_tail(double z) noexcept;

/// Standard normal distribution function.
double normal_cdf(double z) noexcept;

/// One-sample Kolmogorov-Smirnov distance between the empirical distribution
/// of `sample` and Uniform(0, 1).
double ks_uniform_statistic(std::span<const double> sample);

/// Asymptotic Kolmogorov tail probability P(D_n > d), with Stephens'
/// small-sample correction on the argument.
double ks_pvalue(double d, std::size_t n);

/// C(n, 2) as a double.
inline double pairs(std::size_t n) noexcept {
  const double nd = static_cast<double>(n);
  return nd * (nd - 1.0) / 2.0;
}

}  // namespace mdd::stats
