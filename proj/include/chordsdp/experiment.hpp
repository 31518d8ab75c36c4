#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chordsdp/banded.hpp"
#include "chordsdp/decomposition.hpp"
#include "chordsdp/pfb_distributed.hpp"
#include "chordsdp/sdp_problem.hpp"
#include "chordsdp/solve_report.hpp"

namespace chordsdp {

enum class SolverChoice { Semi, Distributed, Both };

/// Accepts "semi", "distributed" or "both". Throws InvalidSpec.
SolverChoice parse_solver(const std::string& name);

struct ExperimentConfig {
  SolverChoice solver = SolverChoice::Both;
  SolverConfig solver_config;
  double zero_tol = 0.0;
  std::filesystem::path out_dir = ".";
  std::string prefix = "run";
};

struct SolverRun {
  std::string name;  // "semi" or "distributed"
  SolveReport report;
  std::optional<double> max_conservation;  // distributed only
  std::filesystem::path trace_file, timing_file, summary_file;
};

struct Comparison {
  double objective_gap;           // |f_semi - f_dist|
  double relative_objective_gap;  // gap / max(1, |f_semi|)
  double max_entry_gap;           // over the aggregate pattern of the reconstructed matrices
  std::filesystem::path file;
};

struct ExperimentResult {
  Decomposition decomposition;
  std::vector<SolverRun> runs;
  std::optional<Comparison> comparison;
};

/// Decomposes the problem, runs the chosen solver(s) and writes, per solver,
///   <prefix>_<solver>_trace.csv    iter,r_eq,r_cons,r_stat,r_consensus,objective
///   <prefix>_<solver>_timing.csv   iter_block,avg_ms_per_100,parallel_time_cum_ms
///   <prefix>_<solver>_summary.json
/// plus <prefix>_comparison.json when both solvers ran.
/// Throws FormatError on I/O failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const SdpProblem& problem);

/// Residual trace with 17 significant digits; NaN prints as "nan".
void write_trace_csv(std::ostream& out, const SolveReport& report);

/// One row per 100 iterations (the last block may be shorter): the block's
/// last iteration, its mean time scaled to 100 iterations, and the running
/// sum over iterations of the slowest agent's time.
void write_timing_csv(std::ostream& out, const SolveReport& report);

/// Clique sizes, overlaps, p and nhat as JSON text.
std::string decomposition_summary(const Decomposition& d);

/// Largest |X(i,j) - Y(i,j)| over the edges and diagonal of the pattern.
double pattern_gap(const AggregatePattern& pattern, const SymMatrix& x, const SymMatrix& y);

enum class SweepAxis { N, n, m };

/// Accepts "N", "n" or "m". Throws InvalidSpec.
SweepAxis parse_axis(const std::string& name);

struct SweepConfig {
  SweepAxis axis = SweepAxis::N;
  std::vector<std::size_t> values;
  BandedSpec base;
  std::size_t iterations = 200;
  SolverChoice solver = SolverChoice::Both;
  double theta = 0.99;
  bool parallel = false;
};

struct SweepPoint {
  std::size_t value;
  std::size_t agents;
  std::size_t dim;
  std::optional<double> semi_ms;         // mean wall time per iteration
  std::optional<double> semi_parallel_ms;
  std::optional<double> dist_ms;
  std::optional<double> dist_parallel_ms;
};

/// Fixed-length runs on banded instances, one per grid value.
std::vector<SweepPoint> sweep(const SweepConfig& cfg);

/// axis,value,agents,dim,semi_ms_per_iter,semi_parallel_ms_per_iter,dist_ms_per_iter,dist_parallel_ms_per_iter
void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<SweepPoint>& points);

}  // namespace chordsdp
