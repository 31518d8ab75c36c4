#include "chordsdp/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chordsdp/errors.hpp"

namespace chordsdp {

SymMatrix::SymMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {
  if (n == 0) throw DimensionMismatch("SymMatrix: dimension must be at least 1");
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) out.values_[i * n + i] = 1.0;
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.values_[i * d.size() + i] = d[i];
  return out;
}

SymMatrix SymMatrix::from_column_major(std::size_t n, std::span<const double> values) {
  if (values.size() != n * n) throw DimensionMismatch("SymMatrix: value count is not n*n");
  SymMatrix out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values_[j * n + j] = values[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      const double v = 0.5 * (values[j * n + i] + values[i * n + j]);
      out.values_[j * n + i] = v;
      out.values_[i * n + j] = v;
    }
  }
  return out;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += values_[i * n_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs(values_[j * n_ + i]);
    best = std::max(best, s);
  }
  return best;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.n_ != n_) throw DimensionMismatch("SymMatrix +=: dimension mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.n_ != n_) throw DimensionMismatch("SymMatrix -=: dimension mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

std::vector<double> vec(const SymMatrix& x) {
  return {x.values().begin(), x.values().end()};
}

SymMatrix mat(std::span<const double> v) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (v.empty() || n * n != v.size()) {
    throw NonSquareLength("mat: length " + std::to_string(v.size()) + " is not a positive perfect square");
  }
  return SymMatrix::from_column_major(n, v);
}

double inner(const SymMatrix& x, const SymMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("inner: dimension mismatch");
  const auto a = x.values();
  const auto b = y.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

SymMatrix EigenDecomposition::reconstruct(std::span<const double> values) const {
  const std::size_t n = dim();
  if (values.size() != n) throw DimensionMismatch("reconstruct: spectrum length mismatch");
  std::vector<double> full(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    const double* v = &eigenvectors[k * n];
    for (std::size_t j = 0; j < n; ++j) {
      const double vj = values[k] * v[j];
      for (std::size_t i = 0; i < n; ++i) full[j * n + i] += v[i] * vj;
    }
  }
  return SymMatrix::from_column_major(n, full);
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) s += a[j * n + i] * a[j * n + i];
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const SymMatrix& x) {
  const std::size_t n = x.dim();
  std::vector<double> a(x.values().begin(), x.values().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = x.frobenius_norm();
  const double target = 1e-12 * norm;
  // Entries below this are left alone; the skipped mass cannot exceed 1e-14 ||X||_F.
  const double negligible = 1e-14 * norm / static_cast<double>(n);
  const std::size_t budget = 30 * n * n;
  std::size_t rotations = 0;

  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[j * n + i]; };

  while (off_diagonal_norm(a, n) > target) {
    if (rotations >= budget) {
      throw ConvergenceFailure("eigh: rotation budget exhausted for dimension " + std::to_string(n));
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= negligible) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          at(k, p) = np;
          at(p, k) = np;
          at(k, q) = nq;
          at(q, k) = nq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[p * n + k];
          const double vkq = v[q * n + k];
          v[p * n + k] = c * vkp - s * vkq;
          v[q * n + k] = s * vkp + c * vkq;
        }
        ++rotations;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return a[l * n + l] < a[r * n + r]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a[src * n + src];
    std::copy_n(&v[src * n], n, &out.eigenvectors[k * n]);
  }
  return out;
}

SymMatrix proj_psd(const SymMatrix& x) {
  const EigenDecomposition eig = eigh(x);
  const auto negatives = static_cast<std::size_t>(
      std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(), [](double l) { return l < 0.0; }));
  if (negatives == 0) return x;
  const std::size_t n = x.dim();
  if (negatives == n) return SymMatrix(n);

  // Rebuild from whichever part of the spectrum is smaller.
  std::vector<double> part(n, 0.0);
  if (negatives * 2 >= n) {
    for (std::size_t k = 0; k < n; ++k) part[k] = std::max(eig.eigenvalues[k], 0.0);
    return eig.reconstruct(part);
  }
  for (std::size_t k = 0; k < n; ++k) part[k] = std::min(eig.eigenvalues[k], 0.0);
  return x - eig.reconstruct(part);
}

std::vector<double> proj_psd_vec(std::span<const double> v) { return vec(proj_psd(mat(v))); }

double min_eigenvalue(const SymMatrix& x) { return eigh(x).eigenvalues.front(); }

}  // namespace chordsdp
