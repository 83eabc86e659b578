#pragma once

// Shared helpers for the test suites: seeded random inputs and naive
// reference implementations written independently of the library code.

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "mdd/matrix.hpp"

namespace testing {

inline mdd::Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t q, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  mdd::Matrix m(n, q);
  for (double& v : m.values()) v = z(rng);
  return m;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  std::vector<double> v(n);
  for (double& e : v) e = z(rng);
  return v;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), abs_floor});
}

/// Plain n x n matrix as nested vectors.
using Grid = std::vector<std::vector<double>>;

inline Grid naive_distances(const mdd::Matrix& x) {
  const std::size_t n = x.rows();
  Grid d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      d[i][j] = std::sqrt(s);
    }
  }
  return d;
}

inline Grid naive_half_squared(std::span<const double> y) {
  const std::size_t n = y.size();
  Grid d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = 0.5 * (y[i] - y[j]) * (y[i] - y[j]);
  }
  return d;
}

/// U-centering written straight from the defining formula.
inline Grid naive_u_center(const Grid& d) {
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  std::vector<double> row(n, 0.0), col(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[i] += d[i][j];
      col[j] += d[i][j];
      total += d[i][j];
    }
  }
  Grid out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      out[i][j] = d[i][j] - row[i] / (nd - 2) - col[j] / (nd - 2) + total / ((nd - 1) * (nd - 2));
    }
  }
  return out;
}

inline double naive_offdiag_inner(const Grid& a, const Grid& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a[i][j] * b[i][j];
    }
  }
  return s;
}

inline double naive_mdd(const mdd::Matrix& x, std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  return naive_offdiag_inner(naive_u_center(naive_distances(x)), naive_u_center(naive_half_squared(y))) /
         (n * (n - 3));
}

inline mdd::Matrix column_of(const mdd::Matrix& x, std::size_t j) {
  const auto c = x.col(j);
  return mdd::Matrix::column(c);
}

inline double c_factor(double n) {
  const double a = std::pow(n - 3, 4) / std::pow(n - 1, 4);
  const double b = 2 * std::pow(n - 3, 4) / (std::pow(n - 1, 4) * std::pow(n - 2, 3));
  const double c = 2 * (n - 3) / (std::pow(n - 1, 4) * std::pow(n - 2, 3));
  return a + b + c;
}

/// Ŝ² through the double sum over column pairs (j, j'), no factorization.
inline double naive_variance_double_sum(const mdd::Matrix& x, std::span<const double> y) {
  const std::size_t n = y.size(), p = x.cols();
  std::vector<Grid> a;
  for (std::size_t j = 0; j < p; ++j) a.push_back(naive_u_center(naive_distances(column_of(x, j))));
  const Grid b = naive_u_center(naive_half_squared(y));
  double s = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t jj = 0; jj < p; ++jj) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) s += a[j][k][l] * a[jj][k][l] * b[k][l] * b[k][l];
      }
    }
  }
  const double nd = static_cast<double>(n);
  return 2.0 * s / (nd * (nd - 1) * c_factor(nd));
}

}  // namespace testing
