#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "chordsdp/banded.hpp"
#include "chordsdp/errors.hpp"
#include "chordsdp/graph.hpp"
#include "chordsdp/sdp_problem.hpp"
#include "support.hpp"

using namespace chordsdp;
using testing::example_graph;
using testing::graph_from;

namespace {

using VList = std::vector<std::size_t>;

VList one_based(const VList& v) {
  VList out(v);
  for (auto& x : out) ++x;
  return out;
}

PatternGraph random_connected(std::size_t n, double density, std::mt19937_64& rng) {
  PatternGraph g(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(v, std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < density) g.add_edge(i, j);
  return g;
}

bool is_complete(const PatternGraph& g, const VList& vs) {
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      if (!g.has_edge(vs[a], vs[b])) return false;
  return true;
}

// Every maximal clique by subset enumeration (n <= 12).
std::set<VList> brute_force_maximal_cliques(const PatternGraph& g) {
  const std::size_t n = g.size();
  std::vector<VList> complete;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    VList vs;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) vs.push_back(v);
    if (is_complete(g, vs)) complete.push_back(vs);
  }
  std::set<VList> out;
  for (const auto& c : complete) {
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (std::find(c.begin(), c.end(), v) != c.end()) continue;
      VList bigger(c);
      bigger.push_back(v);
      if (is_complete(g, bigger)) maximal = false;
    }
    if (maximal) out.insert(c);
  }
  return out;
}

// Smallest fill over every elimination order (n <= 7).
std::size_t brute_force_min_fill(const PatternGraph& g) {
  VList order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t best = static_cast<std::size_t>(-1);
  do {
    PatternGraph h = g;
    std::size_t fill = 0;
    std::vector<bool> gone(g.size(), false);
    for (std::size_t v : order) {
      VList nb;
      for (std::size_t u : h.neighbors(v))
        if (!gone[u]) nb.push_back(u);
      for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b)
          if (!h.has_edge(nb[a], nb[b])) {
            h.add_edge(nb[a], nb[b]);
            ++fill;
          }
      gone[v] = true;
    }
    best = std::min(best, fill);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("PatternGraph basics") {
  PatternGraph g(3);
  g.add_edge(0, 1, 2.5);
  g.add_edge(1, 1);
  CHECK(g.has_edge(1, 0));
  CHECK(g.weight(1, 0) == 2.5);
  CHECK(g.edge_count() == 1);
  CHECK(g.degree(1) == 1);
  CHECK_THROWS_AS(g.add_edge(0, 3), IndexOutOfRange);
}

TEST_CASE("mcs_order with lowest-index ties") {
  CHECK(one_based(mcs_order(graph_from(3, {{1, 2}, {2, 3}, {1, 3}}))) == VList{1, 2, 3});
  CHECK(one_based(mcs_order(graph_from(3, {{1, 2}, {2, 3}}))) == VList{1, 2, 3});
  const PatternGraph g = example_graph();
  CHECK(is_perfect_elimination_order(g, perfect_elimination_order(g)));
  CHECK_THROWS_AS(mcs_order(graph_from(4, {{1, 2}, {3, 4}})), DisconnectedGraph);
}

TEST_CASE("is_chordal") {
  CHECK(is_chordal(example_graph()));
  CHECK_FALSE(is_chordal(graph_from(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}})));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) CHECK(is_chordal(random_connected(2 + t, 0.0, rng)));  // trees
  CHECK_THROWS_AS(is_chordal(graph_from(3, {{1, 2}})), DisconnectedGraph);
}

TEST_CASE("chordal_extension") {
  const PatternGraph ex = example_graph();
  CHECK(chordal_extension(ex) == ex);

  const PatternGraph c4 = graph_from(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  const PatternGraph e4 = chordal_extension(c4);
  CHECK(e4.edge_count() == 5);
  CHECK(e4.has_edge(1, 3));  // (2,4) in 1-based labels
  CHECK(brute_force_min_fill(c4) == 1);

  const PatternGraph c5 = graph_from(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
  CHECK(brute_force_min_fill(c5) == 2);
  CHECK(chordal_extension(c5).edge_count() == 5 + 2);
  CHECK(is_chordal(chordal_extension(c5)));

  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 29;
    const PatternGraph g = random_connected(n, 0.15, rng);
    const PatternGraph h = chordal_extension(g);
    CHECK(is_chordal(h));
    for (auto [i, j] : g.edges()) CHECK(h.has_edge(i, j));
    CHECK(chordal_extension(g) == h);
  }
}

TEST_CASE("maximal_cliques on fixed graphs") {
  const auto ex = maximal_cliques(example_graph());
  REQUIRE(ex.size() == 4);
  CHECK(one_based(ex[0].vertices) == VList{1, 5, 7});
  CHECK(one_based(ex[1].vertices) == VList{2, 3, 6});
  CHECK(one_based(ex[2].vertices) == VList{4, 6, 7});
  CHECK(one_based(ex[3].vertices) == VList{5, 6, 7});
  for (std::size_t i = 0; i < ex.size(); ++i) CHECK(ex[i].index == i);

  const auto k4 = maximal_cliques(graph_from(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
  REQUIRE(k4.size() == 1);
  CHECK(one_based(k4[0].vertices) == VList{1, 2, 3, 4});

  const auto path = maximal_cliques(graph_from(3, {{1, 2}, {2, 3}}));
  REQUIRE(path.size() == 2);
  CHECK(one_based(path[0].vertices) == VList{1, 2});
  CHECK(one_based(path[1].vertices) == VList{2, 3});

  CHECK_THROWS_AS(maximal_cliques(graph_from(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}})), NotChordal);
}

TEST_CASE("maximal_cliques matches subset enumeration on random chordal graphs") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + t % 10;
    const PatternGraph g = chordal_extension(random_connected(n, 0.25, rng));
    const auto cliques = maximal_cliques(g);
    std::set<VList> got;
    for (const auto& c : cliques) got.insert(c.vertices);
    CHECK(got == brute_force_maximal_cliques(g));
    CHECK(cliques.size() <= n);
    CHECK(std::is_sorted(cliques.begin(), cliques.end(),
                         [](const Clique& a, const Clique& b) { return a.vertices < b.vertices; }));
  }
}

TEST_CASE("clique_graph of the seven-vertex example") {
  const auto cliques = maximal_cliques(example_graph());
  const CliqueGraph cg = clique_graph(cliques);
  // in sorted order: 0 = {1,5,7}, 1 = {2,3,6}, 2 = {4,6,7}, 3 = {5,6,7}
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < cg.size(); ++i)
    for (const auto& nb : cg.neighbors[i])
      if (i < nb.index) edges.insert({i, nb.index});
  const std::set<std::pair<std::size_t, std::size_t>> want{{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(edges == want);
  CHECK(cg.edge_count() == 5);
  for (const auto& nb : cg.neighbors[0])
    if (nb.index == 3) CHECK(one_based(nb.overlap) == VList{5, 7});

  const SymMatrix lap = cg.laplacian();
  for (std::size_t i = 0; i < cg.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cg.size(); ++j) row += lap(i, j);
    CHECK(row == 0.0);
  }
  const auto e = eigh(lap);
  CHECK(e.eigenvalues[0] >= -1e-12);
  CHECK(e.eigenvalues[1] > 1e-6);
}

TEST_CASE("clique_graph of a banded pattern is a path") {
  const BandedSpec spec{6, 5, 2, 1, 3};
  const auto inst = gen_banded(spec);
  const auto pattern = aggregate_pattern(inst.problem);
  const CliqueGraph cg = clique_graph(maximal_cliques(pattern.graph));
  REQUIRE(cg.size() == 6);
  CHECK(cg.edge_count() == 5);
  for (std::size_t i = 0; i + 1 < cg.size(); ++i) {
    REQUIRE(!cg.neighbors[i].empty());
    CHECK(cg.neighbors[i].back().index == i + 1);
    CHECK(cg.neighbors[i].back().overlap.size() == 2);
  }
}

TEST_CASE("clique_graph rejects disconnected cliques and applies weight rules") {
  const std::vector<Clique> apart{{{0, 1}, 0}, {{2, 3}, 1}};
  CHECK_THROWS_AS(clique_graph(apart), DisconnectedCliqueGraph);

  const auto cliques = maximal_cliques(graph_from(3, {{1, 2}, {2, 3}}));
  const CliqueGraph cg = clique_graph(cliques, [](const Clique&, const Clique&, std::size_t k) { return 2.0 * k; });
  CHECK(cg.weighted_degree(0) == 2.0);
  CHECK(cg.laplacian()(0, 1) == -2.0);
}

TEST_CASE("owner lookup uses the lowest clique index") {
  const auto cliques = maximal_cliques(example_graph());
  const auto mem = clique_memberships(cliques, 7);
  CHECK(owning_clique(mem, 4, 6) == std::optional<std::size_t>(0));  // (5,7)
  CHECK(owning_clique(mem, 5, 6) == std::optional<std::size_t>(2));  // (6,7)
  CHECK_FALSE(owning_clique(mem, 0, 1).has_value());
}
