#include "chordsdp/sdp_problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chordsdp/decomposition.hpp"
#include "chordsdp/errors.hpp"

namespace chordsdp {

SdpProblem::SdpProblem(SymMatrix cost_, std::vector<SymMatrix> constraints_, std::vector<double> rhs_)
    : cost(std::move(cost_)), constraints(std::move(constraints_)), rhs(std::move(rhs_)) {
  if (constraints.size() != rhs.size()) throw DimensionMismatch("SdpProblem: constraint and rhs counts differ");
  for (const auto& a : constraints)
    if (a.dim() != cost.dim()) throw DimensionMismatch("SdpProblem: constraint dimension differs from cost");
}

AggregatePattern aggregate_pattern(const SdpProblem& p, double zero_tol) {
  const std::size_t n = p.dim();
  AggregatePattern out{PatternGraph(n), std::vector<bool>(n, false)};
  auto absorb = [&](const SymMatrix& m) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = j; i < n; ++i) {
        if (std::abs(m(i, j)) <= zero_tol) continue;
        if (i == j)
          out.diagonal[i] = true;
        else
          out.graph.add_edge(i, j);
      }
    }
  };
  absorb(p.cost);
  for (const auto& a : p.constraints) absorb(a);
  return out;
}

SdpProblem sparsify(const SdpProblem& p, double zero_tol) {
  auto clean = [&](const SymMatrix& m) {
    SymMatrix out = m;
    for (std::size_t j = 0; j < m.dim(); ++j)
      for (std::size_t i = j; i < m.dim(); ++i)
        if (std::abs(m(i, j)) <= zero_tol) out.set(i, j, 0.0);
    return out;
  };
  std::vector<SymMatrix> constraints;
  for (const auto& a : p.constraints) constraints.push_back(clean(a));
  return SdpProblem(clean(p.cost), std::move(constraints), p.rhs);
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const SdpProblem& p, const AggregatePattern& pattern) {
  ValidationReport report;
  if (!is_connected(pattern.graph)) {
    report.violations.push_back({Violation::Kind::Disconnected, "aggregate sparsity pattern is not connected"});
    return report;
  }
  try {
    const std::vector<Clique> cliques = maximal_cliques(chordal_extension(pattern.graph));
    const SplitData split = split_data(p, cliques);
    const std::size_t m = p.constraint_count();
    for (std::size_t i = 0; i < cliques.size(); ++i) {
      const std::size_t ni = cliques[i].size();
      DenseMatrix stacked(m, ni * ni);
      for (std::size_t k = 0; k < m; ++k) {
        const auto values = split.constraints[i][k].values();
        std::copy(values.begin(), values.end(), stacked.row(k).begin());
      }
      const std::size_t rank = stacked.rank(1e-10);
      if (rank < m) {
        report.violations.push_back({Violation::Kind::RankDeficient,
                                     "clique " + std::to_string(i + 1) + ": constraint blocks have rank " +
                                         std::to_string(rank) + " < m = " + std::to_string(m)});
      }
    }
  } catch (const Error& e) {
    report.violations.push_back({Violation::Kind::RankDeficient, std::string("rank check failed: ") + e.what()});
  }
  return report;
}

}  // namespace chordsdp
