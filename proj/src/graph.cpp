#include "chordsdp/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "chordsdp/errors.hpp"

namespace chordsdp {

std::size_t PatternGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

void PatternGraph::add_edge(std::size_t i, std::size_t j, double weight) {
  if (i >= size() || j >= size()) throw IndexOutOfRange("PatternGraph::add_edge: vertex out of range");
  if (i == j) return;
  adjacency_[i][j] = weight;
  adjacency_[j][i] = weight;
}

bool PatternGraph::has_edge(std::size_t i, std::size_t j) const {
  return i < size() && adjacency_[i].contains(j);
}

double PatternGraph::weight(std::size_t i, std::size_t j) const {
  if (i >= size()) return 0.0;
  const auto it = adjacency_[i].find(j);
  return it == adjacency_[i].end() ? 0.0 : it->second;
}

std::vector<std::size_t> PatternGraph::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  out.reserve(adjacency_.at(i).size());
  for (const auto& [j, w] : adjacency_[i]) out.push_back(j);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> PatternGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& [j, w] : adjacency_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

bool Clique::contains(std::size_t v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

std::vector<std::size_t> clique_overlap(const Clique& a, const Clique& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                        std::back_inserter(out));
  return out;
}

std::size_t CliqueGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors) twice += nb.size();
  return twice / 2;
}

double CliqueGraph::weighted_degree(std::size_t i) const {
  double d = 0.0;
  for (const auto& nb : neighbors.at(i)) d += nb.weight;
  return d;
}

double CliqueGraph::max_weighted_degree() const {
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) d = std::max(d, weighted_degree(i));
  return d;
}

SymMatrix CliqueGraph::laplacian() const {
  SymMatrix l(size());
  for (std::size_t i = 0; i < size(); ++i) {
    l.set(i, i, weighted_degree(i));
    for (const auto& nb : neighbors[i]) l.set(i, nb.index, -nb.weight);
  }
  return l;
}

double unit_weight(const Clique&, const Clique&, std::size_t) { return 1.0; }

bool is_connected(const PatternGraph& g) {
  if (g.size() == 0) return true;
  std::vector<bool> seen(g.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        frontier.push(u);
      }
    }
  }
  return count == g.size();
}

namespace {

std::vector<std::size_t> mcs_visit(const PatternGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (pick == n || weight[v] > weight[pick]) pick = v;
    }
    visited[pick] = true;
    order.push_back(pick);
    for (std::size_t u : g.neighbors(pick))
      if (!visited[u]) ++weight[u];
  }
  return order;
}

void require_connected(const PatternGraph& g, const char* who) {
  if (!is_connected(g)) throw DisconnectedGraph(std::string(who) + ": graph is not connected");
}

}  // namespace

std::vector<std::size_t> mcs_order(const PatternGraph& g) {
  require_connected(g, "mcs_order");
  return mcs_visit(g);
}

std::vector<std::size_t> perfect_elimination_order(const PatternGraph& g) {
  auto order = mcs_order(g);
  std::reverse(order.begin(), order.end());
  return order;
}

bool is_perfect_elimination_order(const PatternGraph& g, const std::vector<std::size_t>& order) {
  const std::size_t n = g.size();
  if (order.size() != n) return false;
  std::vector<std::size_t> position(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || position[order[k]] != n) return false;
    position[order[k]] = k;
  }
  for (std::size_t v : order) {
    std::vector<std::size_t> later;
    for (std::size_t u : g.neighbors(v))
      if (position[u] > position[v]) later.push_back(u);
    if (later.empty()) continue;
    const auto first = *std::min_element(later.begin(), later.end(),
                                         [&](std::size_t a, std::size_t b) { return position[a] < position[b]; });
    for (std::size_t u : later)
      if (u != first && !g.has_edge(first, u)) return false;
  }
  return true;
}

bool is_chordal(const PatternGraph& g) { return is_perfect_elimination_order(g, perfect_elimination_order(g)); }

PatternGraph chordal_extension(const PatternGraph& g) {
  if (is_chordal(g)) return g;
  const std::size_t n = g.size();
  PatternGraph out = g;
  std::vector<std::set<std::size_t>> elim(n);
  for (const auto& [i, j] : g.edges()) {
    elim[i].insert(j);
    elim[j].insert(i);
  }
  std::vector<bool> removed(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (removed[v]) continue;
      if (pick == n || elim[v].size() < elim[pick].size()) pick = v;
    }
    const std::vector<std::size_t> nb(elim[pick].begin(), elim[pick].end());
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (!out.has_edge(nb[a], nb[b])) out.add_edge(nb[a], nb[b]);
        elim[nb[a]].insert(nb[b]);
        elim[nb[b]].insert(nb[a]);
      }
    }
    for (std::size_t u : nb) elim[u].erase(pick);
    elim[pick].clear();
    removed[pick] = true;
  }
  return out;
}

std::vector<Clique> maximal_cliques(const PatternGraph& g) {
  auto order = mcs_visit(g);
  std::reverse(order.begin(), order.end());
  if (!is_perfect_elimination_order(g, order)) throw NotChordal("maximal_cliques: graph is not chordal");

  const std::size_t n = g.size();
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;

  std::vector<std::vector<std::size_t>> candidates;
  for (std::size_t v : order) {
    std::vector<std::size_t> c{v};
    for (std::size_t u : g.neighbors(v))
      if (position[u] > position[v]) c.push_back(u);
    std::sort(c.begin(), c.end());
    candidates.push_back(std::move(c));
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<std::vector<std::size_t>> kept;
  for (auto& c : candidates) {
    const bool contained = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return std::includes(k.begin(), k.end(), c.begin(), c.end());
    });
    if (!contained) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());

  std::vector<Clique> out;
  out.reserve(kept.size());
  for (auto& k : kept) out.push_back(Clique{std::move(k), out.size()});
  return out;
}

CliqueGraph clique_graph(const std::vector<Clique>& cliques, const WeightRule& rule) {
  CliqueGraph cg;
  cg.cliques = cliques;
  cg.neighbors.resize(cliques.size());
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      auto overlap = clique_overlap(cliques[i], cliques[j]);
      if (overlap.empty()) continue;
      const double w = rule(cliques[i], cliques[j], overlap.size());
      cg.neighbors[i].push_back({j, overlap, w});
      cg.neighbors[j].push_back({i, std::move(overlap), w});
    }
  }
  for (auto& nb : cg.neighbors)
    std::sort(nb.begin(), nb.end(), [](const auto& a, const auto& b) { return a.index < b.index; });

  PatternGraph agents(cliques.size());
  for (std::size_t i = 0; i < cliques.size(); ++i)
    for (const auto& nb : cg.neighbors[i]) agents.add_edge(i, nb.index);
  if (!is_connected(agents)) throw DisconnectedCliqueGraph("clique_graph: clique intersection graph is not connected");
  return cg;
}

std::vector<std::vector<std::size_t>> clique_memberships(const std::vector<Clique>& cliques, std::size_t n) {
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (std::size_t v : cliques[i].vertices) {
      if (v >= n) throw IndexOutOfRange("clique_memberships: clique vertex outside 0..n-1");
      out[v].push_back(i);
    }
  }
  return out;
}

std::optional<std::size_t> owning_clique(const std::vector<std::vector<std::size_t>>& memberships, std::size_t p,
                                         std::size_t q) {
  const auto& a = memberships.at(p);
  const auto& b = memberships.at(q);
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) return a[ia];
    if (a[ia] < b[ib])
      ++ia;
    else
      ++ib;
  }
  return std::nullopt;
}

}  // namespace chordsdp
