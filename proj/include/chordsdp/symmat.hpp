#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chordsdp {

/// Dense symmetric n x n matrix stored column-major.
///
/// Every mutator writes both (i,j) and (j,i), so the stored values are
/// exactly symmetric at all times.
class SymMatrix {
 public:
  /// Zero matrix of dimension n (n >= 1).
  explicit SymMatrix(std::size_t n);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Symmetrized reshape (M + M^T)/2 of column-major values.
  static SymMatrix from_column_major(std::size_t n, std::span<const double> values);

  std::size_t dim() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[j * n_ + i] = v;
    values_[i * n_ + j] = v;
  }

  std::span<const double> values() const { return values_; }

  double trace() const;
  double frobenius_norm() const;
  /// Largest absolute entry.
  double max_abs() const;
  /// Largest absolute row sum (infinity norm).
  double max_abs_row_sum() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  bool operator==(const SymMatrix& other) const = default;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Eigenvalues in nondecreasing order; eigenvectors stored column-major,
/// column k belongs to eigenvalues[k].
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;

  std::size_t dim() const { return eigenvalues.size(); }
  double vector_entry(std::size_t row, std::size_t k) const {
    return eigenvectors[k * eigenvalues.size() + row];
  }
  /// V diag(values) V^T for a caller-supplied spectrum.
  SymMatrix reconstruct(std::span<const double> values) const;
};

/// Column stacking; result[j*n + i] == X(i,j).
std::vector<double> vec(const SymMatrix& x);

/// Inverse of vec, symmetrizing the reshape. Throws NonSquareLength.
SymMatrix mat(std::span<const double> v);

/// trace(XY). Throws DimensionMismatch.
double inner(const SymMatrix& x, const SymMatrix& y);

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps until the off-diagonal Frobenius norm is at most 1e-12 * ||X||_F.
/// Throws ConvergenceFailure when 30 n^2 rotations do not suffice.
EigenDecomposition eigh(const SymMatrix& x);

/// Frobenius-norm projection onto the PSD cone: negative eigenvalues are
/// clipped to exactly zero.
SymMatrix proj_psd(const SymMatrix& x);

/// Projection of a vectorized block, vec(proj_psd(mat(v))).
std::vector<double> proj_psd_vec(std::span<const double> v);

double min_eigenvalue(const SymMatrix& x);

}  // namespace chordsdp
