#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mdd {

/// Dense row-major matrix of doubles with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested row lists; every row must have the same length.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> col(std::size_t j) const;

  /// Copy of the listed columns, in the listed order.
  Matrix select_columns(std::span<const std::size_t> columns) const;
  /// Copy of the listed rows, in the listed order.
  Matrix select_rows(std::span<const std::size_t> rows) const;

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Response vector plus covariate matrix. Row i of `x` pairs with `y[i]`.
struct Dataset {
  std::vector<double> y;
  Matrix x;
  std::vector<std::string> column_names;  // empty or one name per column of x
  std::string response_name;

  std::size_t n() const noexcept { return y.size(); }
  std::size_t p() const noexcept { return x.cols(); }

  /// Throws InvalidData unless shapes agree, every entry is finite and p >= 1,
  /// and SampleTooSmall unless n >= 4.
  void validate() const;

  Dataset subset_columns(std::span<const std::size_t> columns) const;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (abs_ge(sum_, v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  static bool abs_ge(double a, double b) noexcept { return (a < 0 ? -a : a) >= (b < 0 ? -b : b); }
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> v) noexcept {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value();
}

}  // namespace mdd
