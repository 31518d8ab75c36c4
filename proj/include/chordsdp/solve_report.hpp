#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "chordsdp/decomposition.hpp"

namespace chordsdp {

struct SolverConfig {
  double theta = 0.99;        // step-size safety factor, 0 < theta < 1
  double tol = 1e-6;          // relative to 1 + ||b||
  std::size_t max_iter = 200000;
  std::size_t record_every = 10;
  bool parallel = false;      // agent updates on the TBB scheduler
};

enum class Termination { Converged, MaxIterations };

std::string to_string(Termination t);

/// One decimated sample. Rows are taken after iterations 1, 1 + r, 1 + 2r, ...
/// for r = record_every, so k iterations produce ceil(k / r) rows.
struct TraceRow {
  std::size_t iter;
  double r_eq;
  double r_cons;
  double r_stat;
  double r_consensus;  // NaN for the semi-decentralized solver
  double objective;
};

struct SolveReport {
  std::vector<double> x;       // stacked primal iterate
  std::vector<double> nu;      // coordinator dual, or average of the agent copies
  std::vector<double> lambda;

  std::vector<TraceRow> trace;
  std::vector<double> iteration_ms;  // wall time of each iteration
  std::vector<double> parallel_ms;   // max over agents of per-agent compute time, per iteration

  Termination termination = Termination::MaxIterations;
  std::size_t iterations = 0;
  KktResiduals residuals;
  double consensus = std::numeric_limits<double>::quiet_NaN();
  double objective = 0.0;
};

/// theta / denominator, or theta itself when the denominator is below 1e-12.
double safe_step(double theta, double denominator);

}  // namespace chordsdp
