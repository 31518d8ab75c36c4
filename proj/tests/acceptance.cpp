// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chordsdp/banded.hpp"
#include "chordsdp/decomposition.hpp"
#include "chordsdp/experiment.hpp"
#include "chordsdp/graph.hpp"
#include "chordsdp/pfb_distributed.hpp"
#include "chordsdp/pfb_semi.hpp"
#include "chordsdp/symmat.hpp"
#include "support.hpp"

using namespace chordsdp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Instances for the certification and feasibility checks, all with nhat + m + p <= 400.
std::vector<BandedSpec> small_specs() {
  std::vector<BandedSpec> out;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 4 + s % 3;
    out.push_back(BandedSpec{2 + s % 3, n, 1 + s % 2, 1 + s % 4, 1000 + s});
  }
  return out;
}

Outcome clique_enumeration() {
  Outcome o;
  const PatternGraph g = testing::example_graph();
  const auto start = Clock::now();
  const bool chordal = is_chordal(g);
  const auto cliques = maximal_cliques(g);
  const double ms = 1e3 * seconds_since(start);
  std::vector<std::vector<std::size_t>> got;
  for (const auto& c : cliques) {
    std::vector<std::size_t> v;
    for (std::size_t x : c.vertices) v.push_back(x + 1);
    got.push_back(v);
  }
  const std::vector<std::vector<std::size_t>> want{{1, 5, 7}, {2, 3, 6}, {4, 6, 7}, {5, 6, 7}};
  o.require(chordal, "is_chordal");
  o.require(got == want, "clique list");
  o.require(ms < 1.0, "runtime " + fmt("%.3f ms", ms));
  o.note("4 cliques in " + fmt("%.3f ms", ms));
  return o;
}

Outcome clique_psd_suite() {
  Outcome o;
  const auto start = Clock::now();
  const PatternGraph g = testing::example_graph();
  const auto cliques = maximal_cliques(g);
  std::mt19937_64 rng(2718);
  std::vector<SymMatrix> a{testing::restrict_to(testing::random_symmetric(7, rng), g)};
  const Decomposition dec = decompose(SdpProblem(testing::restrict_to(testing::random_symmetric(7, rng), g), a, {1.0}));

  double worst_necessity = 0.0;
  for (int t = 0; t < 50; ++t) {
    const SymMatrix pi = testing::restrict_to(testing::random_psd(7, rng), g);
    for (const auto& c : cliques) worst_necessity = std::min(worst_necessity, min_eigenvalue(selection_matrix(c, 7).extract(pi)));
  }
  o.require(worst_necessity >= -1e-9, "necessity, min eigenvalue " + fmt("%.3e", worst_necessity));

  double worst_consistency = 0.0, worst_gap = 0.0;
  for (int t = 0; t < 50; ++t) {
    // per-clique PSD blocks that agree on overlaps: principal submatrices of one PSD matrix
    const SymMatrix y = testing::random_psd(7, rng);
    const auto x = dec.sdp.lift(y);
    for (std::size_t i = 0; i < dec.sdp.agent_count(); ++i)
      worst_consistency = std::min(worst_consistency, min_eigenvalue(mat(dec.sdp.slice(std::span<const double>(x), i))));
    const Reconstruction rec = reconstruct(dec.sdp, x, 1e-9);
    for (const auto& c : cliques) {
      const SymMatrix sub = selection_matrix(c, 7).extract(rec.matrix);
      worst_consistency = std::min(worst_consistency, min_eigenvalue(sub));
      worst_gap = std::max(worst_gap, testing::max_abs_diff(sub, selection_matrix(c, 7).extract(y)));
    }
  }
  o.require(worst_consistency >= -1e-9, "consistency, min eigenvalue " + fmt("%.3e", worst_consistency));
  o.require(worst_gap <= 1e-9, "reconstruction gap " + fmt("%.3e", worst_gap));
  const double s = seconds_since(start);
  o.require(s < 1.0, "runtime " + fmt("%.3f s", s));
  o.note("50+50 samples, " + fmt("%.3f s", s));
  return o;
}

Outcome preconditioner_certification() {
  Outcome o;
  const auto start = Clock::now();
  double worst_semi = INFINITY, worst_dist = INFINITY;
  for (const auto& spec : small_specs()) {
    const Decomposition dec = decompose(gen_banded(spec).problem);
    const auto& d = dec.sdp;
    o.require(d.nhat + d.m + d.p <= 400, "instance size");
    worst_semi = std::min(worst_semi, min_eigenvalue(preconditioner(d, step_sizes(d, 0.99))));
    worst_dist = std::min(worst_dist,
                          min_eigenvalue(distributed_preconditioner(d, dec.cliques, dist_step_sizes(d, dec.cliques, 0.99))));
  }
  o.require(worst_semi > 0.0, "semi preconditioner min eigenvalue " + fmt("%.3e", worst_semi));
  o.require(worst_dist > 0.0, "distributed preconditioner min eigenvalue " + fmt("%.3e", worst_dist));
  const double s = seconds_since(start);
  o.require(s < 30.0, "runtime " + fmt("%.1f s", s));
  o.note("20 instances, min eigenvalues " + fmt("%.3e", worst_semi) + " / " + fmt("%.3e", worst_dist) + ", " +
         fmt("%.2f s", s));
  return o;
}

Outcome analytic_optimum() {
  Outcome o;
  const auto start = Clock::now();
  const SdpProblem p = testing::analytic_problem();
  const std::vector<Clique> one{{{0, 1, 2}, 0}};
  const CliqueGraph cg = clique_graph(one);
  const DecomposedSdp d = assemble(p, one, cg);
  SolverConfig cfg;
  cfg.tol = 1e-7;
  const SolveReport semi = solve(d, cfg);
  const DistributedReport dist = solve_distributed(d, cg, cfg);
  o.require(std::abs(semi.objective - 1.0) <= 1e-4, "semi objective " + fmt("%.8f", semi.objective));
  o.require(std::abs(dist.summary.objective - 1.0) <= 1e-4, "distributed objective " + fmt("%.8f", dist.summary.objective));
  const double s = seconds_since(start);
  o.require(s < 5.0, "runtime " + fmt("%.2f s", s));
  o.note("objectives " + fmt("%.8f", semi.objective) + " / " + fmt("%.8f", dist.summary.objective));
  return o;
}

Outcome feasible_point_residuals() {
  Outcome o;
  std::vector<BandedSpec> specs = small_specs();
  specs.push_back(BandedSpec{10, 8, 3, 5, 42});
  double worst_eq = 0.0, worst_time = 0.0;
  for (const auto& spec : specs) {
    const auto start = Clock::now();
    const auto inst = gen_banded(spec);
    const Decomposition dec = decompose(inst.problem);
    const auto lifted = dec.sdp.lift(inst.feasible);
    const auto r = kkt_residual(dec.sdp, lifted, std::vector<double>(dec.sdp.m, 0.0), std::vector<double>(dec.sdp.p, 0.0));
    const double rel = r.equality / (1.0 + norm2(inst.problem.rhs));
    worst_eq = std::max(worst_eq, rel);
    o.require(rel <= 1e-10, "r_eq on seed " + std::to_string(spec.seed));
    o.require(r.consistency == 0.0, "r_cons on seed " + std::to_string(spec.seed));
    worst_time = std::max(worst_time, seconds_since(start));
  }
  o.require(worst_time < 1.0, "runtime " + fmt("%.3f s", worst_time));
  o.note(std::to_string(specs.size()) + " instances, max r_eq/(1+|b|) " + fmt("%.2e", worst_eq) + ", r_cons 0");
  return o;
}

struct RegressionRun {
  ExperimentResult result;
  double seconds_semi = 0.0;
  double seconds_dist = 0.0;
};

RegressionRun regression_run(const fs::path& dir, bool parallel) {
  const auto inst = gen_banded(BandedSpec{10, 8, 3, 5, 42});
  ExperimentConfig cfg;
  cfg.out_dir = dir;
  cfg.prefix = "banded";
  cfg.solver_config.tol = 1e-5;
  cfg.solver_config.max_iter = 200000;
  cfg.solver_config.parallel = parallel;
  const auto start = Clock::now();
  RegressionRun out{run_experiment(cfg, inst.problem), 0.0, 0.0};
  const double total = seconds_since(start);
  // split wall time by summed iteration times
  double semi_ms = 0.0, dist_ms = 0.0;
  for (double t : out.result.runs[0].report.iteration_ms) semi_ms += t;
  for (double t : out.result.runs[1].report.iteration_ms) dist_ms += t;
  out.seconds_semi = total * semi_ms / std::max(1e-9, semi_ms + dist_ms);
  out.seconds_dist = total - out.seconds_semi;
  return out;
}

Outcome convergence_regression(const RegressionRun& run) {
  Outcome o;
  const auto& semi = run.result.runs[0].report;
  const auto& dist = run.result.runs[1].report;
  const double threshold = 1e-5 * (1.0 + norm2(run.result.decomposition.sdp.rhs));
  o.require(semi.termination == Termination::Converged && semi.residuals.max() <= threshold,
            "semi residual " + fmt("%.3e", semi.residuals.max()) + " after " + std::to_string(semi.iterations) + " iterations");
  o.require(dist.termination == Termination::Converged && dist.residuals.max() <= threshold,
            "distributed residual " + fmt("%.3e", dist.residuals.max()) + " after " + std::to_string(dist.iterations) +
                " iterations");
  const auto& cmp = *run.result.comparison;
  o.require(cmp.relative_objective_gap <= 1e-3, "objective gap " + fmt("%.3e", cmp.relative_objective_gap));
  o.require(cmp.max_entry_gap <= 1e-3, "entry gap " + fmt("%.3e", cmp.max_entry_gap));
  o.require(run.seconds_semi < 120.0, "semi runtime " + fmt("%.1f s", run.seconds_semi));
  o.require(run.seconds_dist < 120.0, "distributed runtime " + fmt("%.1f s", run.seconds_dist));
  o.note("threshold " + fmt("%.3e", threshold) + ", semi " + std::to_string(semi.iterations) + " it, distributed " +
         std::to_string(dist.iterations) + " it, objectives " + fmt("%.6f", semi.objective) + " / " +
         fmt("%.6f", dist.objective) + ", rel gap " + fmt("%.2e", cmp.relative_objective_gap) + ", entry gap " +
         fmt("%.2e", cmp.max_entry_gap));
  return o;
}

double change(const std::vector<AgentState>& a, const std::vector<AgentState>& b) {
  double c = 0.0;
  auto upd = [&](const std::vector<double>& u, const std::vector<double>& v) {
    for (std::size_t k = 0; k < u.size(); ++k) c = std::max(c, std::abs(u[k] - v[k]));
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    upd(a[i].x, b[i].x);
    upd(a[i].z, b[i].z);
    upd(a[i].y, b[i].y);
    upd(a[i].nu, b[i].nu);
    upd(a[i].lambda, b[i].lambda);
  }
  return c;
}

Outcome fixed_point_kkt() {
  Outcome o;
  const auto start = Clock::now();
  double worst_semi = 0.0, worst_dist = 0.0, worst_consensus = 0.0;
  std::size_t most_rounds = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Decomposition dec = decompose(gen_banded(BandedSpec{3, 4, 1, 2, 500 + seed}).problem);
    const auto& d = dec.sdp;

    const StepSizes st = step_sizes(d, 0.99);
    SemiState s = initial_state(d);
    double delta = INFINITY;
    for (std::size_t k = 0; k < 400000 && delta > 1e-12; ++k) {
      SemiState next = iterate(d, s, st);
      delta = 0.0;
      for (std::size_t c = 0; c < s.x.size(); ++c) delta = std::max(delta, std::abs(next.x[c] - s.x[c]));
      for (std::size_t c = 0; c < s.nu.size(); ++c) delta = std::max(delta, std::abs(next.nu[c] - s.nu[c]));
      for (std::size_t c = 0; c < s.lambda.size(); ++c) delta = std::max(delta, std::abs(next.lambda[c] - s.lambda[c]));
      s = std::move(next);
    }
    o.require(delta <= 1e-12, "semi did not settle on seed " + std::to_string(500 + seed));
    worst_semi = std::max(worst_semi, kkt_residual(d, s.x, s.nu, s.lambda).max());

    DistributedNetwork net(d, dec.cliques, dist_step_sizes(d, dec.cliques, 0.99));
    auto before = net.states();
    delta = INFINITY;
    std::size_t rounds = 0;
    while (rounds < 400000 && delta > 1e-12) {
      net.round();
      ++rounds;
      auto after = net.states();
      delta = change(before, after);
      before = std::move(after);
    }
    most_rounds = std::max(most_rounds, rounds);
    o.require(delta <= 1e-12, "distributed did not settle on seed " + std::to_string(500 + seed));
    worst_consensus = std::max(worst_consensus, consensus_residual(dec.cliques, before));
    worst_dist = std::max(worst_dist, kkt_residual(d, net.stacked_x(), before[0].nu, before[0].lambda).max());
  }
  o.require(worst_semi <= 1e-8, "semi KKT " + fmt("%.3e", worst_semi));
  o.require(worst_dist <= 1e-8, "distributed KKT " + fmt("%.3e", worst_dist));
  o.require(worst_consensus <= 1e-8, "distributed consensus " + fmt("%.3e", worst_consensus));
  const double s = seconds_since(start);
  o.require(s < 60.0, "runtime " + fmt("%.1f s", s));
  o.note("10 instances, max KKT " + fmt("%.2e", worst_semi) + " / " + fmt("%.2e", worst_dist) + ", up to " +
         std::to_string(most_rounds) + " rounds, " + fmt("%.1f s", s));
  return o;
}

Outcome conservation(const RegressionRun& run) {
  Outcome o;
  const auto& dist = run.result.runs[1];
  const auto& report = dist.report;
  double worst = 0.0;
  // re-run to collect the per-row samples (the experiment keeps only the summary)
  const Decomposition& dec = run.result.decomposition;
  SolverConfig cfg;
  cfg.tol = 1e-5;
  const DistributedReport rerun = solve_distributed(dec.sdp, dec.cliques, cfg);
  for (const auto& c : rerun.conservation) worst = std::max({worst, c.z_sum, c.y_sum});
  o.require(rerun.summary.x == report.x, "rerun differs from the regression run");
  o.require(!rerun.conservation.empty(), "no recorded rounds");
  o.require(worst <= 1e-12, "max |sum dz|, |sum dy| at recorded rounds " + fmt("%.3e", worst));
  o.require(rerun.max_conservation <= 1e-12, "max over all rounds " + fmt("%.3e", rerun.max_conservation));
  o.note(std::to_string(rerun.conservation.size()) + " recorded rounds, max " + fmt("%.2e", worst) +
         ", over all rounds " + fmt("%.2e", rerun.max_conservation));
  return o;
}

Outcome single_agent_equivalence() {
  Outcome o;
  const auto inst = gen_banded(BandedSpec{1, 6, 1, 3, 77});
  const Decomposition dec = decompose(inst.problem);
  o.require(dec.sdp.agent_count() == 1, "single clique");
  const StepSizes semi = step_sizes(dec.sdp, 0.99);
  DistStepSizes dist = dist_step_sizes(dec.sdp, dec.cliques, 0.99);
  dist.alpha = semi.alpha;
  dist.gamma = {semi.gamma};
  dist.tau = {semi.tau};
  DistributedNetwork net(dec.sdp, dec.cliques, dist);
  SemiState s = initial_state(dec.sdp);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    s = iterate(dec.sdp, s, semi);
    net.round();
    const auto& a = net.agent(0).state();
    for (std::size_t c = 0; c < s.x.size(); ++c) worst = std::max(worst, std::abs(a.x[c] - s.x[c]));
    for (std::size_t c = 0; c < s.nu.size(); ++c) worst = std::max(worst, std::abs(a.nu[c] - s.nu[c]));
  }
  o.require(worst <= 1e-12, "max deviation " + fmt("%.3e", worst));
  o.note("1000 iterations, max deviation " + fmt("%.1e", worst));
  return o;
}

Outcome timing_trend() {
  Outcome o;
  const auto start = Clock::now();
  auto check_axis = [&](SweepAxis axis, std::vector<std::size_t> values, const char* name) {
    SweepConfig cfg;
    cfg.axis = axis;
    cfg.values = std::move(values);
    cfg.base = BandedSpec{10, 8, 3, 5, 42};
    cfg.iterations = 300;
    const auto points = sweep(cfg);
    std::string row = std::string(name) + ":";
    for (std::size_t i = 0; i < points.size(); ++i) {
      row += " " + std::to_string(points[i].value) + "->" + fmt("%.3f", *points[i].semi_ms) + "/" +
             fmt("%.3f", *points[i].dist_ms) + "ms";
      if (i == 0) continue;
      o.require(*points[i].semi_ms >= 0.5 * *points[i - 1].semi_ms, std::string("semi trend in ") + name);
      o.require(*points[i].dist_ms >= 0.5 * *points[i - 1].dist_ms, std::string("distributed trend in ") + name);
    }
    o.note(row);
  };
  check_axis(SweepAxis::N, {5, 10, 20}, "N");
  check_axis(SweepAxis::n, {4, 8, 16}, "n");
  const double s = seconds_since(start);
  o.require(s < 300.0, "runtime " + fmt("%.1f s", s));
  return o;
}

Outcome determinism(const RegressionRun& first, const fs::path& dir) {
  Outcome o;
  const RegressionRun second = regression_run(dir, false);
  for (std::size_t r = 0; r < first.result.runs.size(); ++r) {
    const auto& a = first.result.runs[r].trace_file;
    const auto& b = second.result.runs[r].trace_file;
    const std::string ta = slurp(a), tb = slurp(b);
    o.require(!ta.empty() && ta == tb, a.filename().string() + " differs");
    o.note(a.filename().string() + " " + std::to_string(ta.size()) + " bytes identical parallel vs sequential");
  }
  return o;
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "chordsdp_acceptance";
  fs::remove_all(root);
  int failures = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](int id, const char* title, const std::function<Outcome()>& f) {
    try {
      report(id, title, f());
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, std::string("exception: ") + e.what());
      report(id, title, o);
    }
  };

  guarded(1, "clique enumeration", clique_enumeration);
  guarded(2, "clique PSD necessity and consistency", clique_psd_suite);
  guarded(3, "preconditioner certification", preconditioner_certification);
  guarded(4, "analytic optimum", analytic_optimum);
  guarded(5, "feasible-point residuals", feasible_point_residuals);

  std::optional<RegressionRun> reg;
  try {
    reg = regression_run(root / "first", true);
  } catch (const std::exception& e) {
    std::printf("regression run failed: %s\n", e.what());
  }
  if (reg) {
    guarded(6, "convergence regression", [&] { return convergence_regression(*reg); });
  } else {
    guarded(6, "convergence regression", [] { return Outcome{false, "regression run failed"}; });
  }
  guarded(7, "fixed point implies KKT", fixed_point_kkt);
  if (reg) {
    guarded(8, "distributed conservation", [&] { return conservation(*reg); });
  } else {
    guarded(8, "distributed conservation", [] { return Outcome{false, "regression run failed"}; });
  }
  guarded(9, "single-agent equivalence", single_agent_equivalence);
  guarded(10, "timing trend", timing_trend);
  if (reg) {
    guarded(11, "determinism", [&] { return determinism(*reg, root / "second"); });
  } else {
    guarded(11, "determinism", [] { return Outcome{false, "regression run failed"}; });
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
