#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gcae::nn {

/// Dense row-major matrix of doubles.
///
/// Products accumulate in a fixed order (row-major, left to right over the
/// shared dimension) so results are reproducible bit-for-bit.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool all_finite() const noexcept;
  double squared_norm() const noexcept;
  Matrix transposed() const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A * B. Throws DimensionMismatch when A.cols != B.rows.
Matrix matmul(const Matrix& a, const Matrix& b);
/// A^T * B without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// A * B^T without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix relu(const Matrix& m);
Matrix sigmoid(const Matrix& m);

/// Elementwise a += scale * b.
void add_scaled(Matrix& a, const Matrix& b, double scale);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace gcae::nn
