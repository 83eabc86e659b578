#include "mdd/mean_test.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mdd/error.hpp"
#include "mdd/stats.hpp"

namespace mdd {

double finite_sample_factor(std::size_t n) {
  if (n < 4) fail(ErrorKind::SampleTooSmall, "finite_sample_factor needs n >= 4, got " + std::to_string(n));
  const double nd = static_cast<double>(n);
  const double a = std::pow(nd - 3.0, 4);
  const double b = std::pow(nd - 1.0, 4);
  const double c = std::pow(nd - 2.0, 3);
  return a / b + 2.0 * a / (b * c) + 2.0 * (nd - 3.0) / (b * c);
}

MarginalParts prepare_marginal(const Matrix& x, const DistanceMatrix& response_distances) {
  const std::size_t n = x.rows();
  if (response_distances.n() != n) fail(ErrorKind::InvalidData, "covariate and response row counts differ");
  if (x.cols() == 0) fail(ErrorKind::InvalidData, "no covariate columns");
  MarginalParts parts;
  parts.n = n;
  parts.p = x.cols();
  parts.s = centered_sums(x);
  parts.b = u_center(response_distances);
  parts.d = pair_products(parts.s, parts.b);
  parts.mdd_sum = marginal_mdd_sum(parts.s, parts.b);
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = parts.d.row(k);
    double r = 0.0;
    for (std::size_t l = k + 1; l < n; ++l) r += row[l] * row[l];
    acc.add(r);
  }
  parts.sum_d_squared = acc.value();
  return parts;
}

MarginalParts prepare_marginal(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) fail(ErrorKind::InvalidData, "covariate and response row counts differ");
  if (y.size() < 4) fail(ErrorKind::SampleTooSmall, "need n >= 4, got " + std::to_string(y.size()));
  return prepare_marginal(x, half_squared_distance_matrix(y));
}

namespace {

double studentizer_squared(const MarginalParts& parts) {
  const double v = parts.sum_d_squared / (stats::pairs(parts.n) * finite_sample_factor(parts.n));
  if (!(v > 0.0)) {
    fail(ErrorKind::DegenerateData, "variance estimate is zero (constant response or all covariates constant)");
  }
  return v;
}

}  // namespace

double variance_estimate(const Matrix& x, std::span<const double> y) {
  return studentizer_squared(prepare_marginal(x, y));
}

TestResult mean_independence_test(const Matrix& x, std::span<const double> y) {
  return mean_result_from_parts(prepare_marginal(x, y));
}

TestResult mean_result_from_parts(const MarginalParts& parts) {
  const double s2 = studentizer_squared(parts);
  TestResult r;
  r.method = TestMethod::mean;
  r.calibration = Calibration::normal;
  r.n = parts.n;
  r.p = parts.p;
  r.mdd_sum = parts.mdd_sum;
  r.variance_estimate = s2;
  r.statistic = std::sqrt(stats::pairs(parts.n)) * parts.mdd_sum / std::sqrt(s2);
  r.p_value = stats::normal_upper_tail(r.statistic);
  return r;
}

TestResult joint_mdd_test(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) fail(ErrorKind::InvalidData, "covariate and response row counts differ");
  const std::size_t n = y.size();
  if (n < 4) fail(ErrorKind::SampleTooSmall, "need n >= 4, got " + std::to_string(n));
  const auto a = u_center(euclidean_distance_matrix(x));
  const auto b = u_center(half_squared_distance_matrix(y));
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double t = a.d(k, l) * b.d(k, l);
      acc.add(t * t);
    }
  }
  const double eta2 = acc.value() / stats::pairs(n);
  if (!(eta2 > 0.0)) fail(ErrorKind::DegenerateData, "joint studentizer is zero");
  TestResult r;
  r.method = TestMethod::joint;
  r.n = n;
  r.p = x.cols();
  r.mdd_sum = u_inner_product(a, b);
  r.variance_estimate = eta2;
  r.statistic = std::sqrt(stats::pairs(n)) * r.mdd_sum / std::sqrt(eta2);
  r.p_value = stats::normal_upper_tail(r.statistic);
  return r;
}

double unbiased_variance_oracle(const Matrix& x, std::span<const double> y) {
  const std::size_t n = y.size();
  if (x.rows() != n) fail(ErrorKind::InvalidData, "covariate and response row counts differ");
  if (n < kVarianceOracleMinN || n > kVarianceOracleMaxN) {
    fail(ErrorKind::OracleRangeExceeded,
         "unbiased_variance_oracle supports 10 <= n <= 11, got n = " + std::to_string(n));
  }
  const std::size_t p = x.cols();
  const std::size_t m = n - 2;

  // 4-element subsets of the m "free" positions, as bitmasks.
  std::vector<std::uint32_t> quads;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) == 4) quads.push_back(mask);
  }

  std::vector<std::size_t> rest(m);
  std::vector<double> alpha(m * m), beta(m * m);
  std::vector<double> f_alpha(quads.size()), f_beta(quads.size());

  // For fixed (j1, j2) the summand factorizes as
  //   alpha(j3,j4) alpha(j5,j6) beta(j7,j8) beta(j9,j10)
  // with alpha(k,l) = sum_j a(x_j1j, x_j2j, x_kj, x_lj) and beta(k,l) = b(y_j1, y_j2, y_k, y_l),
  // over four disjoint ordered pairs drawn from the remaining indices.
  auto pairing_sum = [&](const std::vector<double>& w, std::uint32_t mask) {
    std::size_t e[4];
    std::size_t c = 0;
    for (std::size_t bit = 0; bit < m; ++bit) {
      if (mask & (1u << bit)) e[c++] = bit;
    }
    auto sym = [&](std::size_t u, std::size_t v) { return w[u * m + v] + w[v * m + u]; };
    // Three ways to split into two unordered pairs; 2 for which pair comes first.
    return 2.0 * (sym(e[0], e[1]) * sym(e[2], e[3]) + sym(e[0], e[2]) * sym(e[1], e[3]) +
                  sym(e[0], e[3]) * sym(e[1], e[2]));
  };

  CompensatedSum total;
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      if (j2 == j1) continue;
      std::size_t c = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j1 && k != j2) rest[c++] = k;
      }
      for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = 0; v < m; ++v) {
          if (u == v) {
            alpha[u * m + v] = beta[u * m + v] = 0.0;
            continue;
          }
          const std::size_t k = rest[u], l = rest[v];
          double s = 0.0;
          for (std::size_t j = 0; j < p; ++j) {
            const double x1 = x(j1, j), x2 = x(j2, j), x3 = x(k, j), x4 = x(l, j);
            s += std::abs(x1 - x2) - std::abs(x1 - x3) - std::abs(x2 - x4) + std::abs(x3 - x4);
          }
          alpha[u * m + v] = s;
          beta[u * m + v] = (y[j1] - y[k]) * (y[j2] - y[l]);
        }
      }
      for (std::size_t q = 0; q < quads.size(); ++q) {
        f_alpha[q] = pairing_sum(alpha, quads[q]);
        f_beta[q] = pairing_sum(beta, quads[q]);
      }
      double acc = 0.0;
      for (std::size_t q1 = 0; q1 < quads.size(); ++q1) {
        if (f_alpha[q1] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t q2 = 0; q2 < quads.size(); ++q2) {
          if ((quads[q1] & quads[q2]) == 0) inner += f_beta[q2];
        }
        acc += f_alpha[q1] * inner;
      }
      total.add(acc);
    }
  }

  double falling = 1.0;  // (n)_10
  for (std::size_t k = 0; k < 10; ++k) falling *= static_cast<double>(n - k);
  return total.value() / falling;
}

}  // namespace mdd
