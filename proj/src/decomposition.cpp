#include "chordsdp/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chordsdp/errors.hpp"

namespace chordsdp {

SelectionMatrix::SelectionMatrix(const Clique& clique, std::size_t n) : rows_(clique.vertices), n_(n) {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (rows_[k] >= n) throw IndexOutOfRange("selection_matrix: vertex " + std::to_string(rows_[k] + 1) + " > n");
    if (k > 0 && rows_[k] <= rows_[k - 1]) throw IndexOutOfRange("selection_matrix: vertices not increasing");
  }
  if (rows_.empty()) throw IndexOutOfRange("selection_matrix: empty clique");
}

SymMatrix SelectionMatrix::extract(const SymMatrix& x) const {
  if (x.dim() != n_) throw DimensionMismatch("SelectionMatrix::extract: dimension mismatch");
  SymMatrix out(size());
  for (std::size_t b = 0; b < size(); ++b)
    for (std::size_t a = b; a < size(); ++a) out.set(a, b, x(rows_[a], rows_[b]));
  return out;
}

SymMatrix SelectionMatrix::embed(const SymMatrix& xi) const {
  if (xi.dim() != size()) throw DimensionMismatch("SelectionMatrix::embed: dimension mismatch");
  SymMatrix out(n_);
  for (std::size_t b = 0; b < size(); ++b)
    for (std::size_t a = b; a < size(); ++a) out.set(rows_[a], rows_[b], xi(a, b));
  return out;
}

DenseMatrix SelectionMatrix::dense() const {
  DenseMatrix out(size(), n_);
  for (std::size_t h = 0; h < size(); ++h) out(h, rows_[h]) = 1.0;
  return out;
}

SelectionMatrix selection_matrix(const Clique& clique, std::size_t n) { return SelectionMatrix(clique, n); }

namespace {

std::size_t local_position(const Clique& c, std::size_t v) {
  return static_cast<std::size_t>(std::lower_bound(c.vertices.begin(), c.vertices.end(), v) - c.vertices.begin());
}

void distribute(const SymMatrix& source, const std::vector<Clique>& cliques,
                const std::vector<std::vector<std::size_t>>& memberships, std::vector<SymMatrix*>& targets) {
  const std::size_t n = source.dim();
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = q; p < n; ++p) {
      const double v = source(p, q);
      if (v == 0.0) continue;
      const auto owner = owning_clique(memberships, p, q);
      if (!owner) {
        throw UncoveredEntry("split_data: entry (" + std::to_string(p + 1) + "," + std::to_string(q + 1) +
                             ") lies in no clique");
      }
      const Clique& c = cliques[*owner];
      targets[*owner]->set(local_position(c, p), local_position(c, q), v);
    }
  }
}

}  // namespace

SplitData split_data(const SdpProblem& p, const std::vector<Clique>& cliques) {
  const auto memberships = clique_memberships(cliques, p.dim());
  SplitData out;
  for (const Clique& c : cliques) {
    out.cost.emplace_back(c.size());
    out.constraints.emplace_back(p.constraint_count(), SymMatrix(c.size()));
  }
  std::vector<SymMatrix*> targets(cliques.size());
  for (std::size_t i = 0; i < cliques.size(); ++i) targets[i] = &out.cost[i];
  distribute(p.cost, cliques, memberships, targets);
  for (std::size_t k = 0; k < p.constraint_count(); ++k) {
    for (std::size_t i = 0; i < cliques.size(); ++i) targets[i] = &out.constraints[i][k];
    distribute(p.constraints[k], cliques, memberships, targets);
  }
  return out;
}

std::vector<ConsistencyBlock> consistency_blocks(const std::vector<Clique>& cliques, const CliqueGraph& cg) {
  std::vector<ConsistencyBlock> out;
  std::size_t row_offset = 0;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    for (const CliqueNeighbor& nb : cg.neighbors.at(i)) {
      const std::size_t j = nb.index;
      if (j <= i) continue;
      const Clique& ci = cliques[i];
      const Clique& cj = cliques[j];
      const std::vector<std::size_t> overlap = clique_overlap(ci, cj);
      const std::size_t k = overlap.size();
      std::vector<SparseMatrix::Entry> own, other;
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t a = 0; a < k; ++a) {
          const std::size_t row = b * k + a;
          own.push_back({row, local_position(ci, overlap[b]) * ci.size() + local_position(ci, overlap[a]), 1.0});
          other.push_back({row, local_position(cj, overlap[b]) * cj.size() + local_position(cj, overlap[a]), -1.0});
        }
      }
      out.push_back(ConsistencyBlock{i, j, overlap, row_offset,
                                     SparseMatrix(k * k, ci.size() * ci.size(), std::move(own)),
                                     SparseMatrix(k * k, cj.size() * cj.size(), std::move(other))});
      row_offset += k * k;
    }
  }
  return out;
}

DecomposedSdp assemble(const SdpProblem& p, const std::vector<Clique>& cliques, const CliqueGraph& cg) {
  if (cg.size() != cliques.size()) throw DimensionMismatch("assemble: clique graph does not match clique list");
  DecomposedSdp d;
  d.ambient_dim = p.dim();
  d.m = p.constraint_count();
  d.rhs = p.rhs;
  d.memberships = clique_memberships(cliques, p.dim());
  d.blocks = consistency_blocks(cliques, cg);
  for (const auto& blk : d.blocks) d.p += blk.rows();

  const SplitData split = split_data(p, cliques);

  std::vector<std::vector<SparseMatrix::Entry>> consistency_entries(cliques.size());
  for (const auto& blk : d.blocks) {
    blk.own.for_each([&](std::size_t r, std::size_t c, double v) {
      consistency_entries[blk.first].push_back({blk.row_offset + r, c, v});
    });
    blk.other.for_each([&](std::size_t r, std::size_t c, double v) {
      consistency_entries[blk.second].push_back({blk.row_offset + r, c, v});
    });
  }

  for (std::size_t i = 0; i < cliques.size(); ++i) {
    const std::size_t ni = cliques[i].size();
    AgentData agent{i, cliques[i], ni, vec(split.cost[i]), DenseMatrix(d.m, ni * ni),
                    SparseMatrix(d.p, ni * ni, std::move(consistency_entries[i]))};
    for (std::size_t k = 0; k < d.m; ++k) {
      const auto values = split.constraints[i][k].values();
      std::copy(values.begin(), values.end(), agent.constraints.row(k).begin());
    }
    d.offsets.push_back(d.nhat);
    d.nhat += ni * ni;
    d.agents.push_back(std::move(agent));
  }
  return d;
}

Decomposition decompose(const SdpProblem& problem, double zero_tol, const WeightRule& rule) {
  const SdpProblem p = zero_tol > 0.0 ? sparsify(problem, zero_tol) : problem;
  AggregatePattern pattern = aggregate_pattern(p, zero_tol);
  PatternGraph chordal = chordal_extension(pattern.graph);
  const std::size_t fill = chordal.edge_count() - pattern.graph.edge_count();
  const std::vector<Clique> cliques = maximal_cliques(chordal);
  CliqueGraph cg = clique_graph(cliques, rule);
  DecomposedSdp sdp = assemble(p, cliques, cg);
  return Decomposition{std::move(pattern), std::move(chordal), fill, std::move(cg), std::move(sdp)};
}

std::vector<double> DecomposedSdp::apply_constraints(std::span<const double> x) const {
  if (x.size() != nhat) throw DimensionMismatch("apply_constraints: length mismatch");
  std::vector<double> out(m, 0.0), part(m);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    agents[i].constraints.multiply(slice(x, i), part);
    for (std::size_t k = 0; k < m; ++k) out[k] += part[k];
  }
  return out;
}

std::vector<double> DecomposedSdp::apply_consistency(std::span<const double> x) const {
  if (x.size() != nhat) throw DimensionMismatch("apply_consistency: length mismatch");
  std::vector<double> out(p, 0.0);
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].consistency.multiply_add(slice(x, i), out);
  return out;
}

void DecomposedSdp::add_constraints_transpose(std::span<const double> nu, std::span<double> out) const {
  if (nu.size() != m || out.size() != nhat) throw DimensionMismatch("add_constraints_transpose: length mismatch");
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].constraints.multiply_transpose_add(nu, slice(out, i));
}

void DecomposedSdp::add_consistency_transpose(std::span<const double> lambda, std::span<double> out) const {
  if (lambda.size() != p || out.size() != nhat) throw DimensionMismatch("add_consistency_transpose: length mismatch");
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].consistency.multiply_transpose_add(lambda, slice(out, i));
}

DenseMatrix DecomposedSdp::stacked_constraints() const {
  DenseMatrix out(m, nhat);
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t c = 0; c < agents[i].vec_size(); ++c) out(k, offsets[i] + c) = agents[i].constraints(k, c);
  return out;
}

SparseMatrix DecomposedSdp::stacked_consistency() const {
  std::vector<SparseMatrix::Entry> entries;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    agents[i].consistency.for_each(
        [&](std::size_t r, std::size_t c, double v) { entries.push_back({r, offsets[i] + c, v}); });
  }
  return SparseMatrix(p, nhat, std::move(entries));
}

std::vector<double> DecomposedSdp::cost_vector() const {
  std::vector<double> f;
  f.reserve(nhat);
  for (const auto& a : agents) f.insert(f.end(), a.cost.begin(), a.cost.end());
  return f;
}

double DecomposedSdp::objective(std::span<const double> x) const {
  if (x.size() != nhat) throw DimensionMismatch("objective: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto xi = slice(x, i);
    for (std::size_t c = 0; c < xi.size(); ++c) s += agents[i].cost[c] * xi[c];
  }
  return s;
}

std::vector<double> DecomposedSdp::lift(const SymMatrix& x) const {
  if (x.dim() != ambient_dim) throw DimensionMismatch("lift: dimension mismatch");
  std::vector<double> out;
  out.reserve(nhat);
  for (const auto& a : agents) {
    const SymMatrix xi = SelectionMatrix(a.clique, ambient_dim).extract(x);
    out.insert(out.end(), xi.values().begin(), xi.values().end());
  }
  return out;
}

std::vector<double> DecomposedSdp::project(std::span<const double> v) const {
  if (v.size() != nhat) throw DimensionMismatch("project: length mismatch");
  std::vector<double> out(nhat);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto pi = proj_psd_vec(slice(v, i));
    std::copy(pi.begin(), pi.end(), slice(std::span<double>(out), i).begin());
  }
  return out;
}

Reconstruction reconstruct(const DecomposedSdp& d, std::span<const double> x, double tol) {
  if (x.size() != d.nhat) throw DimensionMismatch("reconstruct: length mismatch");
  double disagreement = 0.0;
  std::vector<double> diff;
  for (const auto& blk : d.blocks) {
    diff.assign(blk.rows(), 0.0);
    blk.own.multiply_add(d.slice(x, blk.first), diff);
    blk.other.multiply_add(d.slice(x, blk.second), diff);
    disagreement = std::max(disagreement, norm_inf(diff));
  }
  if (disagreement > tol) {
    throw OverlapMismatch("reconstruct: overlap disagreement " + std::to_string(disagreement) +
                          " exceeds tolerance " + std::to_string(tol));
  }

  SymMatrix out(d.ambient_dim);
  for (std::size_t q = 0; q < d.ambient_dim; ++q) {
    for (std::size_t p = q; p < d.ambient_dim; ++p) {
      const auto owner = owning_clique(d.memberships, p, q);
      if (!owner) continue;
      const AgentData& a = d.agents[*owner];
      const auto xi = d.slice(x, *owner);
      const std::size_t lp = local_position(a.clique, p);
      const std::size_t lq = local_position(a.clique, q);
      out.set(p, q, 0.5 * (xi[lq * a.dim + lp] + xi[lp * a.dim + lq]));
    }
  }
  return Reconstruction{std::move(out), disagreement};
}

double KktResiduals::max() const { return std::max({stationarity, equality, consistency}); }

KktResiduals kkt_residual(const DecomposedSdp& d, std::span<const double> x, std::span<const double> nu,
                          std::span<const double> lambda) {
  if (x.size() != d.nhat || nu.size() != d.m || lambda.size() != d.p)
    throw DimensionMismatch("kkt_residual: length mismatch");

  KktResiduals r;
  std::vector<double> ax = d.apply_constraints(x);
  for (std::size_t k = 0; k < d.m; ++k) ax[k] -= d.rhs[k];
  r.equality = norm2(ax);
  r.consistency = norm2(d.apply_consistency(x));

  std::vector<double> step = d.cost_vector();
  d.add_constraints_transpose(nu, step);
  d.add_consistency_transpose(lambda, step);
  for (std::size_t c = 0; c < d.nhat; ++c) step[c] = x[c] - step[c];
  const std::vector<double> projected = d.project(step);
  double s = 0.0;
  for (std::size_t c = 0; c < d.nhat; ++c) s += (x[c] - projected[c]) * (x[c] - projected[c]);
  r.stationarity = std::sqrt(s);
  return r;
}

}  // namespace chordsdp
