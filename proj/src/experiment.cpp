#include "chordsdp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "chordsdp/errors.hpp"
#include "chordsdp/pfb_semi.hpp"

namespace chordsdp {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw FormatError("failed writing " + path.string());
}

json summary_json(const SolverRun& run, const Decomposition& dec, const SolverConfig& cfg) {
  const SolveReport& r = run.report;
  json s;
  s["solver"] = run.name;
  s["termination"] = to_string(r.termination);
  s["iterations"] = r.iterations;
  s["threshold"] = cfg.tol * (1.0 + norm2(dec.sdp.rhs));
  s["r_eq"] = r.residuals.equality;
  s["r_cons"] = r.residuals.consistency;
  s["r_stat"] = r.residuals.stationarity;
  s["r_consensus"] = number_or_null(r.consensus);
  s["objective"] = r.objective;
  s["avg_ms_per_100"] = 100.0 * mean(r.iteration_ms);
  s["parallel_time_ms"] = std::accumulate(r.parallel_ms.begin(), r.parallel_ms.end(), 0.0);
  if (run.max_conservation) s["max_conservation"] = *run.max_conservation;
  s["agents"] = dec.sdp.agent_count();
  s["nhat"] = dec.sdp.nhat;
  s["m"] = dec.sdp.m;
  s["p"] = dec.sdp.p;
  s["theta"] = cfg.theta;
  s["tol"] = cfg.tol;
  return s;
}

void write_run_files(SolverRun& run, const ExperimentConfig& cfg, const Decomposition& dec) {
  const std::string stem = cfg.prefix + "_" + run.name;
  run.trace_file = cfg.out_dir / (stem + "_trace.csv");
  run.timing_file = cfg.out_dir / (stem + "_timing.csv");
  run.summary_file = cfg.out_dir / (stem + "_summary.json");

  auto trace = open_out(run.trace_file);
  write_trace_csv(trace, run.report);
  finish(trace, run.trace_file);

  auto timing = open_out(run.timing_file);
  write_timing_csv(timing, run.report);
  finish(timing, run.timing_file);

  auto summary = open_out(run.summary_file);
  summary << summary_json(run, dec, cfg.solver_config).dump(2) << "\n";
  finish(summary, run.summary_file);
}

}  // namespace

SolverChoice parse_solver(const std::string& name) {
  if (name == "semi") return SolverChoice::Semi;
  if (name == "distributed") return SolverChoice::Distributed;
  if (name == "both") return SolverChoice::Both;
  throw InvalidSpec("unknown solver '" + name + "' (expected semi, distributed or both)");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "N") return SweepAxis::N;
  if (name == "n") return SweepAxis::n;
  if (name == "m") return SweepAxis::m;
  throw InvalidSpec("unknown sweep axis '" + name + "' (expected N, n or m)");
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "iter,r_eq,r_cons,r_stat,r_consensus,objective\n";
  for (const auto& row : report.trace) {
    out << row.iter << ',' << fmt17(row.r_eq) << ',' << fmt17(row.r_cons) << ',' << fmt17(row.r_stat) << ','
        << fmt17(row.r_consensus) << ',' << fmt17(row.objective) << '\n';
  }
}

void write_timing_csv(std::ostream& out, const SolveReport& report) {
  out << "iter_block,avg_ms_per_100,parallel_time_cum_ms\n";
  double cumulative = 0.0;
  const std::size_t total = report.iteration_ms.size();
  for (std::size_t start = 0; start < total; start += 100) {
    const std::size_t end = std::min(total, start + 100);
    double block = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      block += report.iteration_ms[k];
      cumulative += report.parallel_ms[k];
    }
    out << end << ',' << fmt17(100.0 * block / static_cast<double>(end - start)) << ',' << fmt17(cumulative) << '\n';
  }
}

std::string decomposition_summary(const Decomposition& d) {
  json s;
  s["n"] = d.sdp.ambient_dim;
  s["m"] = d.sdp.m;
  s["fill_edges"] = d.fill_edges;
  s["cliques"] = d.cliques.size();
  json sizes = json::array();
  json members = json::array();
  for (const auto& c : d.cliques.cliques) {
    sizes.push_back(c.size());
    json v = json::array();
    for (std::size_t x : c.vertices) v.push_back(x + 1);
    members.push_back(std::move(v));
  }
  s["clique_sizes"] = std::move(sizes);
  s["clique_vertices"] = std::move(members);
  json overlaps = json::array();
  for (const auto& b : d.sdp.blocks)
    overlaps.push_back({{"cliques", {b.first + 1, b.second + 1}}, {"size", b.overlap.size()}});
  s["overlaps"] = std::move(overlaps);
  s["p"] = d.sdp.p;
  s["nhat"] = d.sdp.nhat;
  return s.dump(2) + "\n";
}

double pattern_gap(const AggregatePattern& pattern, const SymMatrix& x, const SymMatrix& y) {
  if (x.dim() != y.dim() || x.dim() != pattern.graph.size()) throw DimensionMismatch("pattern_gap: size mismatch");
  double gap = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (pattern.diagonal[i]) gap = std::max(gap, std::abs(x(i, i) - y(i, i)));
  for (const auto& [i, j] : pattern.graph.edges()) gap = std::max(gap, std::abs(x(i, j) - y(i, j)));
  return gap;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const SdpProblem& problem) {
  ExperimentResult result{decompose(problem, cfg.zero_tol), {}, std::nullopt};
  const Decomposition& dec = result.decomposition;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw FormatError("cannot create " + cfg.out_dir.string() + ": " + ec.message());

  if (cfg.solver != SolverChoice::Distributed) {
    SolverRun run{"semi", solve(dec.sdp, cfg.solver_config), std::nullopt, {}, {}, {}};
    write_run_files(run, cfg, dec);
    result.runs.push_back(std::move(run));
  }
  if (cfg.solver != SolverChoice::Semi) {
    DistributedReport dist = solve_distributed(dec.sdp, dec.cliques, cfg.solver_config);
    SolverRun run{"distributed", std::move(dist.summary), dist.max_conservation, {}, {}, {}};
    write_run_files(run, cfg, dec);
    result.runs.push_back(std::move(run));
  }

  if (result.runs.size() == 2) {
    const SolveReport& a = result.runs[0].report;
    const SolveReport& b = result.runs[1].report;
    const double inf = std::numeric_limits<double>::infinity();
    const SymMatrix xa = reconstruct(dec.sdp, a.x, inf).matrix;
    const SymMatrix xb = reconstruct(dec.sdp, b.x, inf).matrix;
    Comparison c;
    c.objective_gap = std::abs(a.objective - b.objective);
    c.relative_objective_gap = c.objective_gap / std::max(1.0, std::abs(a.objective));
    c.max_entry_gap = pattern_gap(dec.pattern, xa, xb);
    c.file = cfg.out_dir / (cfg.prefix + "_comparison.json");

    json s;
    s["semi_objective"] = a.objective;
    s["distributed_objective"] = b.objective;
    s["objective_gap"] = c.objective_gap;
    s["relative_objective_gap"] = c.relative_objective_gap;
    s["max_entry_gap"] = c.max_entry_gap;
    s["semi_termination"] = to_string(a.termination);
    s["distributed_termination"] = to_string(b.termination);
    auto out = open_out(c.file);
    out << s.dump(2) << "\n";
    finish(out, c.file);
    result.comparison = c;
  }
  return result;
}

std::vector<SweepPoint> sweep(const SweepConfig& cfg) {
  SolverConfig solver;
  solver.theta = cfg.theta;
  solver.tol = 0.0;
  solver.max_iter = cfg.iterations;
  solver.record_every = std::max<std::size_t>(1, cfg.iterations);
  solver.parallel = cfg.parallel;

  std::vector<SweepPoint> points;
  for (std::size_t value : cfg.values) {
    BandedSpec spec = cfg.base;
    switch (cfg.axis) {
      case SweepAxis::N:
        spec.N = value;
        break;
      case SweepAxis::n:
        spec.n = value;
        break;
      case SweepAxis::m:
        spec.m = value;
        break;
    }
    const BandedInstance inst = gen_banded(spec);
    const Decomposition dec = decompose(inst.problem);
    SweepPoint pt{value, dec.sdp.agent_count(), inst.problem.dim(), {}, {}, {}, {}};
    if (cfg.solver != SolverChoice::Distributed) {
      const SolveReport r = solve(dec.sdp, solver);
      pt.semi_ms = mean(r.iteration_ms);
      pt.semi_parallel_ms = mean(r.parallel_ms);
    }
    if (cfg.solver != SolverChoice::Semi) {
      const DistributedReport r = solve_distributed(dec.sdp, dec.cliques, solver);
      pt.dist_ms = mean(r.summary.iteration_ms);
      pt.dist_parallel_ms = mean(r.summary.parallel_ms);
    }
    points.push_back(pt);
  }
  return points;
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepPoint>& points) {
  const char* name = axis == SweepAxis::N ? "N" : axis == SweepAxis::n ? "n" : "m";
  auto cell = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
  out << "axis,value,agents,dim,semi_ms_per_iter,semi_parallel_ms_per_iter,dist_ms_per_iter,dist_parallel_ms_per_iter\n";
  for (const auto& p : points) {
    out << name << ',' << p.value << ',' << p.agents << ',' << p.dim << ',' << cell(p.semi_ms) << ','
        << cell(p.semi_parallel_ms) << ',' << cell(p.dist_ms) << ',' << cell(p.dist_parallel_ms) << '\n';
  }
}

}  // namespace chordsdp
