#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chordsdp/dense.hpp"
#include "chordsdp/graph.hpp"
#include "chordsdp/sdp_problem.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// The 0/1 matrix P with P(h, rows[h]) = 1, extracting the principal
/// submatrix indexed by a clique.
class SelectionMatrix {
 public:
  /// Throws IndexOutOfRange when a clique vertex is >= n.
  SelectionMatrix(const Clique& clique, std::size_t n);

  std::size_t size() const { return rows_.size(); }
  std::size_t ambient_dim() const { return n_; }
  const std::vector<std::size_t>& rows() const { return rows_; }

  /// P X P^T
  SymMatrix extract(const SymMatrix& x) const;
  /// P^T X_i P
  SymMatrix embed(const SymMatrix& xi) const;
  DenseMatrix dense() const;

 private:
  std::vector<std::size_t> rows_;
  std::size_t n_;
};

SelectionMatrix selection_matrix(const Clique& clique, std::size_t n);

/// Per-clique cost and constraint matrices, indexed [clique] and [clique][k].
struct SplitData {
  std::vector<SymMatrix> cost;
  std::vector<std::vector<SymMatrix>> constraints;
};

/// Each nonzero entry (p,q) goes to the lowest-index clique containing p and q.
/// Throws UncoveredEntry when no clique contains some nonzero entry.
SplitData split_data(const SdpProblem& p, const std::vector<Clique>& cliques);

/// Equality of the overlapping entries of cliques `first` < `second`.
///
/// Row r = b * |overlap| + a compares entry (overlap[a], overlap[b]); `own`
/// acts on x_first with +1, `other` on x_second with -1.
struct ConsistencyBlock {
  std::size_t first;
  std::size_t second;
  std::vector<std::size_t> overlap;
  std::size_t row_offset;  // first row of the block in the stacked D
  SparseMatrix own;
  SparseMatrix other;

  std::size_t rows() const { return overlap.size() * overlap.size(); }
};

/// One block per overlapping pair i < j, ordered lexicographically.
std::vector<ConsistencyBlock> consistency_blocks(const std::vector<Clique>& cliques, const CliqueGraph& cg);

struct AgentData {
  std::size_t index;
  Clique clique;
  std::size_t dim;                 // n_i
  std::vector<double> cost;        // c_i = vec(C_i)
  DenseMatrix constraints;         // A_i, m x n_i^2
  SparseMatrix consistency;        // D_i, p x n_i^2

  std::size_t vec_size() const { return dim * dim; }
};

/// Vectorized clique-tree conversion of an SDP.
struct DecomposedSdp {
  std::size_t ambient_dim = 0;  // n
  std::size_t m = 0;
  std::size_t p = 0;
  std::size_t nhat = 0;  // sum of n_i^2
  std::vector<AgentData> agents;
  std::vector<ConsistencyBlock> blocks;
  std::vector<std::size_t> offsets;  // agent -> first column in the stacked vector
  std::vector<double> rhs;
  std::vector<std::vector<std::size_t>> memberships;

  std::size_t agent_count() const { return agents.size(); }

  std::span<const double> slice(std::span<const double> x, std::size_t i) const {
    return x.subspan(offsets[i], agents[i].vec_size());
  }
  std::span<double> slice(std::span<double> x, std::size_t i) const {
    return x.subspan(offsets[i], agents[i].vec_size());
  }

  /// A x
  std::vector<double> apply_constraints(std::span<const double> x) const;
  /// D x
  std::vector<double> apply_consistency(std::span<const double> x) const;
  /// out += A^T nu
  void add_constraints_transpose(std::span<const double> nu, std::span<double> out) const;
  /// out += D^T lambda
  void add_consistency_transpose(std::span<const double> lambda, std::span<double> out) const;

  DenseMatrix stacked_constraints() const;
  SparseMatrix stacked_consistency() const;

  /// F = col(c_i)
  std::vector<double> cost_vector() const;
  double objective(std::span<const double> x) const;

  /// col(vec(P_i X P_i^T))
  std::vector<double> lift(const SymMatrix& x) const;
  /// Blockwise projection onto the product of PSD cones.
  std::vector<double> project(std::span<const double> v) const;
};

DecomposedSdp assemble(const SdpProblem& p, const std::vector<Clique>& cliques, const CliqueGraph& cg);

/// The whole pipeline: aggregate pattern, chordal extension, maximal cliques,
/// clique graph, assembly.
struct Decomposition {
  AggregatePattern pattern;
  PatternGraph chordal;
  std::size_t fill_edges = 0;
  CliqueGraph cliques;
  DecomposedSdp sdp;
};

Decomposition decompose(const SdpProblem& p, double zero_tol = 0.0, const WeightRule& rule = unit_weight);

struct Reconstruction {
  SymMatrix matrix;
  double disagreement;  // max over blocks of ||D_ij x_i + D_ji x_j||_inf
};

/// Entries covered by some clique are taken from their owner clique; all
/// other entries are zero. Throws OverlapMismatch when disagreement > tol.
Reconstruction reconstruct(const DecomposedSdp& d, std::span<const double> x, double tol);

struct KktResiduals {
  double stationarity = 0.0;
  double equality = 0.0;
  double consistency = 0.0;

  double max() const;
};

/// r_stat = ||x - proj_S(x - (F + A^T nu + D^T lambda))||, r_eq = ||Ax - b||,
/// r_cons = ||Dx||. Throws DimensionMismatch.
KktResiduals kkt_residual(const DecomposedSdp& d, std::span<const double> x, std::span<const double> nu,
                          std::span<const double> lambda);

}  // namespace chordsdp
