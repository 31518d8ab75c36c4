#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chordsdp/graph.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// min <C,X>  s.t.  <A_k,X> = b_k (k = 1..m),  X PSD.
struct SdpProblem {
  SdpProblem(SymMatrix cost, std::vector<SymMatrix> constraints, std::vector<double> rhs);

  std::size_t dim() const { return cost.dim(); }
  std::size_t constraint_count() const { return constraints.size(); }

  SymMatrix cost;
  std::vector<SymMatrix> constraints;
  std::vector<double> rhs;
};

/// Union of the supports of C and all A_k.
struct AggregatePattern {
  PatternGraph graph;
  std::vector<bool> diagonal;  // diagonal[i]: some data matrix is nonzero at (i,i)
};

AggregatePattern aggregate_pattern(const SdpProblem& p, double zero_tol = 0.0);

/// Copy of p with every entry of magnitude <= zero_tol set to exactly zero.
SdpProblem sparsify(const SdpProblem& p, double zero_tol);

struct Violation {
  enum class Kind { Disconnected, RankDeficient };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
};

/// Checks connectivity of the pattern and, on the cliques of
/// its chordal extension, linear independence of the owner-split A_{k,i}.
/// Never throws.
ValidationReport validate(const SdpProblem& p, const AggregatePattern& pattern);

}  // namespace chordsdp
