#include "mdd/core_mdd.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mdd/error.hpp"

namespace mdd {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidData, std::string("non-finite entry in ") + what);
  }
}

void require_min_n(std::size_t n, std::size_t min_n, const char* what) {
  if (n < min_n) {
    fail(ErrorKind::SampleTooSmall,
         std::string(what) + " needs n >= " + std::to_string(min_n) + ", got " + std::to_string(n));
  }
}

void mirror_upper(Matrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
  }
}

}  // namespace

DistanceMatrix abs_distance_matrix(std::span<const double> v) {
  require_min_n(v.size(), 2, "abs_distance_matrix");
  require_finite(v, "abs_distance_matrix input");
  const std::size_t n = v.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = std::abs(v[i] - v[j]);
  }
  mirror_upper(d);
  return {std::move(d)};
}

DistanceMatrix euclidean_distance_matrix(const Matrix& m) {
  require_min_n(m.rows(), 2, "euclidean_distance_matrix");
  if (!m.all_finite()) fail(ErrorKind::InvalidData, "non-finite entry in euclidean_distance_matrix input");
  const std::size_t n = m.rows();
  Matrix d(n, n);
  if (m.cols() == 1) {
    // Exact agreement with abs_distance_matrix: sqrt(t*t) can round for
    // subnormal or huge t, so take |t| directly.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) d(i, j) = std::abs(m(i, 0) - m(j, 0));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto ri = m.row(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto rj = m.row(j);
        double acc = 0.0;
        for (std::size_t c = 0; c < ri.size(); ++c) {
          const double t = ri[c] - rj[c];
          acc += t * t;
        }
        d(i, j) = std::sqrt(acc);
      }
    }
  }
  mirror_upper(d);
  return {std::move(d)};
}

DistanceMatrix half_squared_distance_matrix(std::span<const double> y) {
  require_min_n(y.size(), 2, "half_squared_distance_matrix");
  require_finite(y, "half_squared_distance_matrix input");
  const std::size_t n = y.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double t = y[i] - y[j];
      d(i, j) = 0.5 * t * t;
    }
  }
  mirror_upper(d);
  return {std::move(d)};
}

UCenteredMatrix u_center(const DistanceMatrix& dist) {
  const std::size_t n = dist.n();
  require_min_n(n, 4, "u_center");
  const Matrix& d = dist.d;

  std::vector<double> row_sum(n);
  CompensatedSum grand;
  for (std::size_t i = 0; i < n; ++i) {
    row_sum[i] = compensated_sum(d.row(i));
    grand.add(row_sum[i]);
  }
  const double nm2 = static_cast<double>(n) - 2.0;
  const double g = grand.value() / ((static_cast<double>(n) - 1.0) * nm2);
  for (double& r : row_sum) r /= nm2;

  // Upper triangle then mirror, so the result is symmetric bit for bit.
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = d.row(i);
    auto dst = out.row(i);
    for (std::size_t j = i + 1; j < n; ++j) dst[j] = src[j] - (row_sum[i] + row_sum[j]) + g;
  }
  mirror_upper(out);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = d(i, i) - 2.0 * row_sum[i] + g;
  return {std::move(out), n};
}

double u_inner_product(const UCenteredMatrix& a, const UCenteredMatrix& b) {
  const std::size_t n = a.n();
  if (b.n() != n) fail(ErrorKind::InvalidData, "u_inner_product: size mismatch");
  require_min_n(n, 4, "u_inner_product");
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ra = a.d.row(i);
    const auto rb = b.d.row(i);
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += ra[j] * rb[j];
    acc.add(row);
  }
  const double nd = static_cast<double>(n);
  return 2.0 * acc.value() / (nd * (nd - 3.0));
}

double max_offdiagonal_row_sum(const UCenteredMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j != i) s.add(m.d(i, j));
    }
    worst = std::max(worst, std::abs(s.value()));
  }
  return worst;
}

MddValue mdd_unbiased(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) fail(ErrorKind::InvalidData, "mdd_unbiased: x and y row counts differ");
  require_min_n(y.size(), 4, "mdd_unbiased");
  const auto a = u_center(euclidean_distance_matrix(x));
  const auto b = u_center(half_squared_distance_matrix(y));
  return {u_inner_product(a, b)};
}

MddValue mdd_unbiased_trace(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) fail(ErrorKind::InvalidData, "mdd_unbiased_trace: x and y row counts differ");
  const std::size_t n = y.size();
  require_min_n(n, 4, "mdd_unbiased_trace");
  const auto a = euclidean_distance_matrix(x);
  const auto b = half_squared_distance_matrix(y);

  CompensatedSum trace_ab, sum_a, sum_b, sum_ab;
  for (std::size_t i = 0; i < n; ++i) {
    double ra = 0.0, rb = 0.0, tr = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      ra += a.d(i, j);
      rb += b.d(i, j);
      tr += a.d(i, j) * b.d(j, i);
    }
    trace_ab.add(tr);
    sum_a.add(ra);
    sum_b.add(rb);
    sum_ab.add(ra * rb);  // (1'A)(B1) summed over i, with A, B symmetric
  }
  const double nd = static_cast<double>(n);
  const double total = trace_ab.value() + sum_a.value() * sum_b.value() / ((nd - 1.0) * (nd - 2.0)) -
                       2.0 * sum_ab.value() / (nd - 2.0);
  return {total / (nd * (nd - 3.0))};
}

MddValue mdd_kernel_oracle(const Matrix& x, std::span<const double> y) {
  const std::size_t n = y.size();
  if (x.rows() != n) fail(ErrorKind::InvalidData, "mdd_kernel_oracle: x and y row counts differ");
  if (n < 4 || n > kKernelOracleMaxN) {
    fail(ErrorKind::OracleRangeExceeded,
         "mdd_kernel_oracle supports 4 <= n <= 12, got n = " + std::to_string(n));
  }
  const auto a = euclidean_distance_matrix(x).d;
  const auto b = half_squared_distance_matrix(y).d;

  // h(Z_i, Z_j, Z_q, Z_r) = 1/6 sum_{s<t,u<v} (A_st B_uv + A_st B_st) - 1/12 sum_{(s,t,u)} A_st B_su,
  // both sums running over permutations (s,t,u,v) of the four indices.
  auto kernel = [&](const std::array<std::size_t, 4>& idx) {
    double pair_term = 0.0;
    double triple_term = 0.0;
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      const std::size_t s = idx[perm[0]], t = idx[perm[1]], u = idx[perm[2]], v = idx[perm[3]];
      if (s < t && u < v) pair_term += a(s, t) * b(u, v) + a(s, t) * b(s, t);
      // Each ordered triple (s,t,u) appears once as the prefix of a permutation.
      triple_term += a(s, t) * b(s, u);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return pair_term / 6.0 - triple_term / 12.0;
  };

  CompensatedSum acc;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t q = j + 1; q < n; ++q)
        for (std::size_t r = q + 1; r < n; ++r) {
          acc.add(kernel({i, j, q, r}));
          ++count;
        }
  return {acc.value() / static_cast<double>(count)};
}

double dcov_unbiased(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail(ErrorKind::InvalidData, "dcov_unbiased: length mismatch");
  require_min_n(u.size(), 4, "dcov_unbiased");
  return u_inner_product(u_center(abs_distance_matrix(u)), u_center(abs_distance_matrix(v)));
}

UCenteredMatrix centered_sums(const Matrix& x) {
  const std::size_t n = x.rows();
  require_min_n(n, 4, "centered_sums");
  if (!x.all_finite()) fail(ErrorKind::InvalidData, "non-finite covariate value");
  Matrix l1(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto rk = x.row(k);
    for (std::size_t l = k + 1; l < n; ++l) {
      const auto rl = x.row(l);
      double acc = 0.0;
      for (std::size_t j = 0; j < rk.size(); ++j) acc += std::abs(rk[j] - rl[j]);
      l1(k, l) = acc;
    }
  }
  mirror_upper(l1);
  return u_center(DistanceMatrix{std::move(l1)});
}

Matrix pair_products(const UCenteredMatrix& s, const UCenteredMatrix& b) {
  const std::size_t n = s.n();
  if (b.n() != n) fail(ErrorKind::InvalidData, "pair_products: size mismatch");
  Matrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) d(k, l) = s.d(k, l) * b.d(k, l);
  }
  mirror_upper(d);
  return d;
}

double marginal_mdd_sum(const UCenteredMatrix& s, const UCenteredMatrix& b) { return u_inner_product(s, b); }

}  // namespace mdd
