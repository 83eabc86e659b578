#pragma once

// Distance matrices, U-centering and the unbiased MDD / distance-covariance
// estimators that every test statistic in the library is assembled from.

#include <cstddef>
#include <span>

#include "mdd/matrix.hpp"

namespace mdd {

/// Symmetric, zero-diagonal, nonnegative n x n matrix of pairwise distances.
struct DistanceMatrix {
  Matrix d;
  std::size_t n() const noexcept { return d.rows(); }
};

/// Result of U-centering a DistanceMatrix (or a sum of such). Off-diagonal
/// rows sum to zero. The diagonal is whatever the centering formula yields
/// and is never read by inner products.
struct UCenteredMatrix {
  Matrix d;
  std::size_t source_n = 0;
  std::size_t n() const noexcept { return d.rows(); }
};

/// Squared-MDD estimate. Unbiased, so small negative values are legitimate.
struct MddValue {
  double value = 0.0;
};

DistanceMatrix abs_distance_matrix(std::span<const double> v);
DistanceMatrix euclidean_distance_matrix(const Matrix& m);
/// d[i][j] = (y_i - y_j)^2 / 2.
DistanceMatrix half_squared_distance_matrix(std::span<const double> y);

/// Requires n >= 4.
UCenteredMatrix u_center(const DistanceMatrix& dist);

/// (1 / (n (n - 3))) * sum_{i != j} a_ij b_ij.
double u_inner_product(const UCenteredMatrix& a, const UCenteredMatrix& b);

/// Largest |sum_{j != i} d_ij| over rows; zero up to rounding for any
/// properly U-centered matrix.
double max_offdiagonal_row_sum(const UCenteredMatrix& m);

/// Unbiased MDD(y | x)^2 with Euclidean distances on the rows of `x`,
/// computed as the U-centered inner product.
MddValue mdd_unbiased(const Matrix& x, std::span<const double> y);

/// Same estimator through the closed-form trace identity
/// (tr(AB) + 1'A1 1'B1 / ((n-1)(n-2)) - 2 1'AB1 / (n-2)) / (n (n-3)).
MddValue mdd_unbiased_trace(const Matrix& x, std::span<const double> y);

/// Brute-force fourth-order U-statistic over every 4-subset. Only for
/// 4 <= n <= 12; throws OracleRangeExceeded otherwise.
MddValue mdd_kernel_oracle(const Matrix& x, std::span<const double> y);

inline constexpr std::size_t kKernelOracleMaxN = 12;

/// Unbiased squared distance covariance of two scalar samples.
double dcov_unbiased(std::span<const double> u, std::span<const double> v);

/// S[k][l] = sum_j U-centered |x_kj - x_lj|. Streams over columns; since
/// U-centering is linear this equals the U-centered L1 distance matrix.
UCenteredMatrix centered_sums(const Matrix& x);

/// Elementwise product d_kl = s_kl * b_kl over the strict upper triangle,
/// stored symmetric with zero diagonal.
Matrix pair_products(const UCenteredMatrix& s, const UCenteredMatrix& b);

/// Sum of p marginal MDD estimates from the precomputed column sums:
/// (1 / (n (n - 3))) * sum_{k != l} S_kl B_kl.
double marginal_mdd_sum(const UCenteredMatrix& s, const UCenteredMatrix& b);

}  // namespace mdd
