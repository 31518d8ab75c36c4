#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// Undirected weighted graph on vertices 0..n-1 (files and reports use 1-based labels).
class PatternGraph {
 public:
  explicit PatternGraph(std::size_t n) : adjacency_(n) {}

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const;

  /// Adds {i,j}; self-loops are ignored. Re-adding overwrites the weight.
  void add_edge(std::size_t i, std::size_t j, double weight = 1.0);
  bool has_edge(std::size_t i, std::size_t j) const;
  double weight(std::size_t i, std::size_t j) const;
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }

  /// Sorted neighbor list.
  std::vector<std::size_t> neighbors(std::size_t i) const;
  /// Edges as (i,j), i<j, in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool operator==(const PatternGraph&) const = default;

 private:
  std::vector<std::map<std::size_t, double>> adjacency_;
};

struct Clique {
  std::vector<std::size_t> vertices;  // strictly increasing
  std::size_t index = 0;

  std::size_t size() const { return vertices.size(); }
  bool contains(std::size_t v) const;
};

/// Sorted vertex intersection of two cliques.
std::vector<std::size_t> clique_overlap(const Clique& a, const Clique& b);

struct CliqueNeighbor {
  std::size_t index;
  std::vector<std::size_t> overlap;
  double weight;
};

/// Clique intersection graph: agents are cliques, edges join overlapping cliques.
struct CliqueGraph {
  std::vector<Clique> cliques;
  std::vector<std::vector<CliqueNeighbor>> neighbors;  // sorted by neighbor index

  std::size_t size() const { return cliques.size(); }
  std::size_t edge_count() const;
  double weighted_degree(std::size_t i) const;
  double max_weighted_degree() const;
  /// L = Delta - W over the cliques.
  SymMatrix laplacian() const;
};

using WeightRule = std::function<double(const Clique&, const Clique&, std::size_t overlap_size)>;

/// Unit weight on every overlapping pair.
double unit_weight(const Clique&, const Clique&, std::size_t);

bool is_connected(const PatternGraph& g);

/// Maximum-cardinality-search visiting order with lowest-index tie-breaking.
/// Each vertex's earlier-visited neighbors form a clique iff g is chordal,
/// so the reversed order is a perfect elimination ordering.
/// Throws DisconnectedGraph.
std::vector<std::size_t> mcs_order(const PatternGraph& g);

/// Reverse of mcs_order.
std::vector<std::size_t> perfect_elimination_order(const PatternGraph& g);

/// True when every vertex's later neighbors in `order` form a clique.
bool is_perfect_elimination_order(const PatternGraph& g, const std::vector<std::size_t>& order);

/// Throws DisconnectedGraph.
bool is_chordal(const PatternGraph& g);

/// Greedy minimum-degree fill-in; chordal inputs come back unchanged.
/// Throws DisconnectedGraph.
PatternGraph chordal_extension(const PatternGraph& g);

/// Maximal cliques, each sorted, listed lexicographically with index set to the
/// list position. Throws NotChordal.
std::vector<Clique> maximal_cliques(const PatternGraph& g);

/// Throws DisconnectedCliqueGraph.
CliqueGraph clique_graph(const std::vector<Clique>& cliques, const WeightRule& rule = unit_weight);

/// For each vertex, the sorted list of cliques containing it.
std::vector<std::vector<std::size_t>> clique_memberships(const std::vector<Clique>& cliques, std::size_t n);

/// Lowest-index clique containing both p and q.
std::optional<std::size_t> owning_clique(const std::vector<std::vector<std::size_t>>& memberships, std::size_t p,
                                         std::size_t q);

}  // namespace chordsdp
