#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mdd/matrix.hpp"
#include "mdd/test_result.hpp"

namespace mdd {

/// One cell (level_a, level_b) of a two-way layout.
struct Cell {
  std::size_t level_a = 0;
  std::size_t level_b = 0;
  std::string label;
  Dataset data;
};

/// Observations partitioned into the cells of an I x J design. Cells may be
/// unbalanced; each needs at least four rows and all share the same p.
struct CellTable {
  std::size_t levels_a = 1;
  std::size_t levels_b = 1;
  std::vector<Cell> cells;

  void validate() const;
};

struct FactorialOptions {
  /// Divide each per-cell variance estimate by c_{n_ij}, matching the
  /// single-sample studentizer. Off by default: the cell-wise sigma estimate
  /// is the plain (1/C(n_ij,2)) sum of squared pair products.
  bool per_cell_finite_sample_factor = false;
};

/// T_F,n = sum_ij sqrt(C(n_ij,2)) sum_h MDD_{n_ij}(Y_ij | x_ij,h)^2 / sqrt(sum_ij S_ij^2),
/// one-sided normal p-value. A degenerate cell raises DegenerateData naming it.
TestResult factorial_mean_test(const CellTable& table, const FactorialOptions& options = {});

/// Splits `data` into cells keyed by the distinct values of one or two of its
/// covariate columns (factor columns are removed from the covariates). Levels
/// are ordered by value.
CellTable partition_by_factors(const Dataset& data, std::span<const std::size_t> factor_columns);

}  // namespace mdd
