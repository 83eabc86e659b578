#include "mdd/factorial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mdd/error.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/stats.hpp"

namespace mdd {

void CellTable::validate() const {
  if (cells.empty()) fail(ErrorKind::InvalidData, "factorial design has no cells");
  if (levels_a < 1 || levels_b < 1) fail(ErrorKind::InvalidData, "factor level counts must be >= 1");
  const std::size_t p = cells.front().data.p();
  for (const auto& cell : cells) {
    if (cell.data.n() < 4) {
      fail(ErrorKind::SampleTooSmall,
           "cell " + cell.label + " has " + std::to_string(cell.data.n()) + " observations, need >= 4");
    }
    if (cell.data.p() != p) fail(ErrorKind::InvalidData, "cell " + cell.label + " has a different covariate count");
    cell.data.validate();
  }
}

TestResult factorial_mean_test(const CellTable& table, const FactorialOptions& options) {
  table.validate();
  CompensatedSum numerator;
  CompensatedSum variance;
  std::size_t total_n = 0;
  for (const auto& cell : table.cells) {
    const auto parts = prepare_marginal(cell.data.x, cell.data.y);
    double s2 = parts.sum_d_squared / stats::pairs(parts.n);
    if (options.per_cell_finite_sample_factor) s2 /= finite_sample_factor(parts.n);
    if (!(s2 > 0.0)) fail(ErrorKind::DegenerateData, "cell " + cell.label + " has zero variance estimate");
    numerator.add(std::sqrt(stats::pairs(parts.n)) * parts.mdd_sum);
    variance.add(s2);
    total_n += parts.n;
  }
  TestResult r;
  r.method = TestMethod::factorial;
  r.n = total_n;
  r.p = table.cells.front().data.p();
  r.mdd_sum = numerator.value();
  r.variance_estimate = variance.value();
  r.statistic = numerator.value() / std::sqrt(variance.value());
  r.p_value = stats::normal_upper_tail(r.statistic);
  return r;
}

namespace {

std::string level_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

CellTable partition_by_factors(const Dataset& data, std::span<const std::size_t> factor_columns) {
  if (factor_columns.empty() || factor_columns.size() > 2) {
    fail(ErrorKind::InvalidConfig, "factorial designs take one or two factor columns");
  }
  for (std::size_t c : factor_columns) {
    if (c >= data.p()) fail(ErrorKind::InvalidConfig, "factor column index out of range");
  }
  if (factor_columns.size() == 2 && factor_columns[0] == factor_columns[1]) {
    fail(ErrorKind::InvalidConfig, "the two factor columns must differ");
  }

  std::vector<std::size_t> covariates;
  for (std::size_t c = 0; c < data.p(); ++c) {
    if (std::find(factor_columns.begin(), factor_columns.end(), c) == factor_columns.end()) covariates.push_back(c);
  }
  if (covariates.empty()) fail(ErrorKind::InvalidData, "no covariates left after removing factor columns");

  auto levels_of = [&](std::size_t col) {
    std::map<double, std::size_t> levels;
    for (std::size_t i = 0; i < data.n(); ++i) levels.emplace(data.x(i, col), 0);
    std::size_t k = 0;
    for (auto& [value, idx] : levels) idx = k++;
    return levels;
  };
  const auto levels_a = levels_of(factor_columns[0]);
  const auto levels_b = factor_columns.size() == 2 ? levels_of(factor_columns[1]) : std::map<double, std::size_t>{{0.0, 0}};

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t a = levels_a.at(data.x(i, factor_columns[0]));
    const std::size_t b = factor_columns.size() == 2 ? levels_b.at(data.x(i, factor_columns[1])) : 0;
    rows[{a, b}].push_back(i);
  }

  CellTable table;
  table.levels_a = levels_a.size();
  table.levels_b = levels_b.size();
  if (rows.size() != table.levels_a * table.levels_b) {
    fail(ErrorKind::InvalidData, "factorial design has empty cells");
  }
  const Dataset reduced = data.subset_columns(covariates);
  for (const auto& [key, idx] : rows) {
    Cell cell;
    cell.level_a = key.first;
    cell.level_b = key.second;
    std::string label = "(";
    for (const auto& [value, k] : levels_a) {
      if (k == key.first) label += level_text(value);
    }
    if (factor_columns.size() == 2) {
      for (const auto& [value, k] : levels_b) {
        if (k == key.second) label += "," + level_text(value);
      }
    }
    cell.label = label + ")";
    cell.data.x = reduced.x.select_rows(idx);
    cell.data.y.reserve(idx.size());
    for (std::size_t i : idx) cell.data.y.push_back(data.y[i]);
    cell.data.column_names = reduced.column_names;
    cell.data.response_name = data.response_name;
    table.cells.push_back(std::move(cell));
  }
  return table;
}

}  // namespace mdd
