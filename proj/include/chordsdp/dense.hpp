#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chordsdp {

/// Row-major rectangular matrix. Used for the per-agent constraint blocks A_i
/// and for dense assemblies in diagnostics.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += M^T x
  void multiply_transpose_add(std::span<const double> x, std::span<double> y) const;

  double max_abs_row_sum() const;
  std::vector<double> abs_column_sums() const;

  /// Rank by Gaussian elimination with complete pivoting; pivots below
  /// rel_tol * (largest pivot) count as zero.
  std::size_t rank(double rel_tol = 1e-10) const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Compressed sparse row matrix.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;
  /// Entries may arrive in any order; duplicates are summed.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += M x
  void multiply_add(std::span<const double> x, std::span<double> y) const;
  /// y += M^T x
  void multiply_transpose_add(std::span<const double> x, std::span<double> y) const;

  double max_abs_row_sum() const;
  std::vector<double> abs_column_sums() const;
  DenseMatrix to_dense() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) f(r, cols_idx_[k], values_[k]);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace chordsdp
