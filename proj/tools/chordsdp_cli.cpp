// Command-line front end: instance generation, decomposition reports,
// solver runs and timing sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chordsdp/banded.hpp"
#include "chordsdp/decomposition.hpp"
#include "chordsdp/errors.hpp"
#include "chordsdp/experiment.hpp"
#include "chordsdp/problem_io.hpp"

namespace {

struct Globals {
  std::uint64_t seed = 42;
  double tol = 1e-6;
  double theta = 0.99;
  std::size_t max_iter = 200000;
  bool parallel = false;
};

void print_run(const chordsdp::SolverRun& run) {
  const auto& r = run.report;
  std::printf("%-11s %-14s iters=%zu objective=%.10g r_eq=%.3e r_cons=%.3e r_stat=%.3e", run.name.c_str(),
              chordsdp::to_string(r.termination).c_str(), r.iterations, r.objective, r.residuals.equality,
              r.residuals.consistency, r.residuals.stationarity);
  if (run.max_conservation) std::printf(" r_consensus=%.3e", r.consensus);
  std::printf("\n  trace: %s\n", run.trace_file.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chordal decomposition SDP solvers: generator, decomposer and benchmark driver"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  bool sequential = false;
  app.add_option("--seed", g.seed, "RNG seed for generated instances");
  app.add_option("--tol", g.tol, "stopping tolerance relative to 1 + ||b||")->check(CLI::PositiveNumber);
  app.add_option("--theta", g.theta, "step-size safety factor in (0,1)")
      ->check(CLI::Range(0.0, 1.0) & !CLI::IsMember({0.0, 1.0}));
  app.add_option("--max-iter", g.max_iter, "iteration cap");
  auto* seq_flag = app.add_flag("--sequential", sequential, "run agent updates one after another (default)");
  app.add_flag("--parallel", g.parallel, "run agent updates on the TBB scheduler")->excludes(seq_flag);

  chordsdp::BandedSpec spec;
  std::string out_file;
  auto* gen = app.add_subcommand("gen", "generate a random banded instance");
  gen->add_option("--N", spec.N, "number of blocks");
  gen->add_option("--n", spec.n, "block size");
  gen->add_option("--rho", spec.rho, "overlap between consecutive blocks");
  gen->add_option("--m", spec.m, "number of equality constraints");
  gen->add_option("-o,--output", out_file, "problem file to write")->required();

  std::string problem_file;
  double zero_tol = 0.0;
  auto* dec = app.add_subcommand("decompose", "report the clique decomposition of a problem file");
  dec->add_option("problem", problem_file, "problem file")->required()->check(CLI::ExistingFile);
  dec->add_option("--zero-tol", zero_tol, "entries with |v| <= zero-tol count as zero");

  std::string solver_name = "both";
  chordsdp::ExperimentConfig exp;
  auto* solve = app.add_subcommand("solve", "run the solver(s) on a problem file");
  solve->add_option("problem", problem_file, "problem file")->required()->check(CLI::ExistingFile);
  solve->add_option("--solver", solver_name, "semi, distributed or both")
      ->check(CLI::IsMember({"semi", "distributed", "both"}));
  solve->add_option("--out-dir", exp.out_dir, "directory for trace, timing and summary files");
  solve->add_option("--prefix", exp.prefix, "file name prefix");
  solve->add_option("--record-every", exp.solver_config.record_every, "trace decimation")->check(CLI::PositiveNumber);
  solve->add_option("--zero-tol", exp.zero_tol, "entries with |v| <= zero-tol count as zero");

  chordsdp::SweepConfig sw;
  std::string axis_name = "N";
  std::string sweep_solver = "both";
  auto* sweep = app.add_subcommand("sweep", "per-iteration time over a grid of N, n or m");
  sweep->add_option("--axis", axis_name, "parameter to vary")->check(CLI::IsMember({"N", "n", "m"}));
  sweep->add_option("--values", sw.values, "grid values")->required()->delimiter(',');
  sweep->add_option("--N", sw.base.N, "number of blocks when fixed");
  sweep->add_option("--n", sw.base.n, "block size when fixed");
  sweep->add_option("--rho", sw.base.rho, "overlap");
  sweep->add_option("--m", sw.base.m, "number of equality constraints when fixed");
  sweep->add_option("--iterations", sw.iterations, "iterations per run")->check(CLI::PositiveNumber);
  sweep->add_option("--solver", sweep_solver, "semi, distributed or both")
      ->check(CLI::IsMember({"semi", "distributed", "both"}));
  sweep->add_option("-o,--output", out_file, "CSV file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      spec.seed = g.seed;
      const auto inst = chordsdp::gen_banded(spec);
      chordsdp::save_problem(inst.problem, out_file);
      std::printf("wrote %s: n=%zu m=%zu kappa=%.17g\n", out_file.c_str(), inst.problem.dim(),
                  inst.problem.constraint_count(), inst.kappa);
    } else if (*dec) {
      const auto problem = chordsdp::load_problem(problem_file);
      std::cout << chordsdp::decomposition_summary(chordsdp::decompose(problem, zero_tol));
    } else if (*solve) {
      const auto problem = chordsdp::load_problem(problem_file);
      exp.solver = chordsdp::parse_solver(solver_name);
      exp.solver_config.tol = g.tol;
      exp.solver_config.theta = g.theta;
      exp.solver_config.max_iter = g.max_iter;
      exp.solver_config.parallel = g.parallel;
      const auto result = chordsdp::run_experiment(exp, problem);
      for (const auto& run : result.runs) print_run(run);
      if (result.comparison) {
        std::printf("objective gap %.3e (relative %.3e), max entry gap %.3e\n", result.comparison->objective_gap,
                    result.comparison->relative_objective_gap, result.comparison->max_entry_gap);
      }
    } else if (*sweep) {
      sw.axis = chordsdp::parse_axis(axis_name);
      sw.solver = chordsdp::parse_solver(sweep_solver);
      sw.base.seed = g.seed;
      sw.theta = g.theta;
      sw.parallel = g.parallel;
      const auto points = chordsdp::sweep(sw);
      if (out_file.empty()) {
        chordsdp::write_sweep_csv(std::cout, sw.axis, points);
      } else {
        std::ofstream out(out_file);
        if (!out) throw chordsdp::FormatError("cannot open " + out_file + " for writing");
        chordsdp::write_sweep_csv(out, sw.axis, points);
      }
    }
  } catch (const chordsdp::InvalidSpec& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
