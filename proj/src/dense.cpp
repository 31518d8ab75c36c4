#include "chordsdp/dense.hpp"

#include <algorithm>
#include <cmath>

#include "chordsdp/errors.hpp"

namespace chordsdp {

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw DimensionMismatch("DenseMatrix::multiply");
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    const double* a = &data_[r * cols_];
    for (std::size_t c = 0; c < cols_; ++c) s += a[c] * x[c];
    y[r] = s;
  }
}

void DenseMatrix::multiply_transpose_add(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) throw DimensionMismatch("DenseMatrix::multiply_transpose_add");
  for (std::size_t r = 0; r < rows_; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* a = &data_[r * cols_];
    for (std::size_t c = 0; c < cols_; ++c) y[c] += a[c] * xr;
  }
}

double DenseMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (double v : row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> DenseMatrix::abs_column_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) sums[c] += std::abs(data_[r * cols_ + c]);
  return sums;
}

std::size_t DenseMatrix::rank(double rel_tol) const {
  std::vector<double> a = data_;
  std::vector<bool> row_used(rows_, false), col_used(cols_, false);
  double first_pivot = 0.0;
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(rows_, cols_); ++step) {
    double best = 0.0;
    std::size_t pr = 0, pc = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (col_used[c]) continue;
        const double v = std::abs(a[r * cols_ + c]);
        if (v > best) {
          best = v;
          pr = r;
          pc = c;
        }
      }
    }
    if (step == 0) first_pivot = best;
    if (best == 0.0 || best <= rel_tol * first_pivot) break;
    row_used[pr] = true;
    col_used[pc] = true;
    ++rank;
    const double pivot = a[pr * cols_ + pc];
    for (std::size_t r = 0; r < rows_; ++r) {
      if (row_used[r]) continue;
      const double f = a[r * cols_ + pc] / pivot;
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) a[r * cols_ + c] -= f * a[pr * cols_ + c];
    }
  }
  return rank;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& l, const Entry& r) { return l.row != r.row ? l.row < r.row : l.col < r.col; });
  std::vector<std::size_t> row_of;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Entry& e = entries[k];
    if (e.row >= rows || e.col >= cols) throw IndexOutOfRange("SparseMatrix: entry outside shape");
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      values_.back() += e.value;
      continue;
    }
    row_of.push_back(e.row);
    cols_idx_.push_back(e.col);
    values_.push_back(e.value);
  }
  row_start_.assign(rows + 1, 0);
  for (std::size_t r : row_of) ++row_start_[r + 1];
  for (std::size_t r = 0; r < rows; ++r) row_start_[r + 1] += row_start_[r];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(x, y);
}

void SparseMatrix::multiply_add(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw DimensionMismatch("SparseMatrix::multiply_add");
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
    y[r] += s;
  }
}

void SparseMatrix::multiply_transpose_add(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) throw DimensionMismatch("SparseMatrix::multiply_transpose_add");
  for (std::size_t r = 0; r < rows_; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) y[cols_idx_[k]] += values_[k] * xr;
  }
}

double SparseMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) s += std::abs(values_[k]);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> SparseMatrix::abs_column_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) sums[cols_idx_[k]] += std::abs(values_[k]);
  return sums;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix out(rows_, cols_);
  for_each([&](std::size_t r, std::size_t c, double v) { out(r, c) += v; });
  return out;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace chordsdp
