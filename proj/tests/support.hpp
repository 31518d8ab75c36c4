#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "chordsdp/graph.hpp"
#include "chordsdp/sdp_problem.hpp"
#include "chordsdp/symmat.hpp"

namespace testing {

using namespace chordsdp;

// 1-based edge list helper.
inline PatternGraph graph_from(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  PatternGraph g(n);
  for (auto [i, j] : edges) g.add_edge(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  return g;
}

// Seven vertices, cliques {1,5,7}, {5,6,7}, {4,6,7}, {2,3,6}.
inline PatternGraph example_graph() {
  return graph_from(7, {{1, 5}, {1, 7}, {5, 7}, {5, 6}, {6, 7}, {4, 6}, {4, 7}, {2, 3}, {2, 6}, {3, 6}});
}

inline SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  SymMatrix x(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) x.set(i, j, u(rng));
  return x;
}

// B B^T for a random square B.
inline SymMatrix random_psd(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> b(n * n);
  for (double& v : b) v = g(rng);
  SymMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
      x.set(i, j, s);
    }
  return x;
}

// Keep only the entries on the diagonal and the edges of g.
inline SymMatrix restrict_to(const SymMatrix& x, const PatternGraph& g) {
  SymMatrix out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out.set(i, i, x(i, i));
  for (auto [i, j] : g.edges()) out.set(i, j, x(i, j));
  return out;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

// Single clique, C = diag(3,1,2), A_1 = I, b = 1: optimum 1 at X = e_2 e_2^T.
inline SdpProblem analytic_problem() {
  std::vector<double> c{3.0, 1.0, 2.0};
  return SdpProblem(SymMatrix::diagonal(c), {SymMatrix::identity(3)}, {1.0});
}

}  // namespace testing
