#include "mdd/matrix.hpp"

#include <cmath>

#include "mdd/error.hpp"

namespace mdd {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::InvalidData, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::column(std::span<const double> v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

std::vector<double> Matrix::col(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) out(i, c) = (*this)(i, columns[c]);
  }
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = row(rows[r]);
    auto dst = out.row(r);
    for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
  }
  return out;
}

bool Matrix::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    fail(ErrorKind::InvalidData, "response has " + std::to_string(y.size()) + " rows but covariates have " +
                                     std::to_string(x.rows()));
  }
  if (x.cols() == 0) fail(ErrorKind::InvalidData, "dataset has no covariate columns");
  if (!column_names.empty() && column_names.size() != x.cols()) {
    fail(ErrorKind::InvalidData, "column name count does not match covariate count");
  }
  if (y.size() < 4) fail(ErrorKind::SampleTooSmall, "need n >= 4, got n = " + std::to_string(y.size()));
  for (double v : y) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidData, "non-finite response value");
  }
  if (!x.all_finite()) fail(ErrorKind::InvalidData, "non-finite covariate value");
}

Dataset Dataset::subset_columns(std::span<const std::size_t> columns) const {
  Dataset out;
  out.y = y;
  out.x = x.select_columns(columns);
  out.response_name = response_name;
  if (!column_names.empty()) {
    out.column_names.reserve(columns.size());
    for (std::size_t c : columns) out.column_names.push_back(column_names[c]);
  }
  return out;
}

}  // namespace mdd
