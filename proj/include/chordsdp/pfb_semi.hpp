#pragma once

#include <cstddef>
#include <vector>

#include "chordsdp/decomposition.hpp"
#include "chordsdp/solve_report.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// Iterate of the semi-decentralized scheme: stacked primal x with the
/// coordinator's multipliers.
struct SemiState {
  std::vector<double> x;
  std::vector<double> nu;
  std::vector<double> lambda;
  std::size_t iteration = 0;
};

struct StepSizes {
  std::vector<double> alpha;  // per agent
  double gamma = 0.0;
  double tau = 0.0;
  double theta = 0.0;
};

/// Gershgorin-certified step sizes:
///   alpha_i = theta / max abs column sum of [A_i; D_i]
///   gamma   = theta / max abs row sum of A
///   tau     = theta / max abs row sum of D
/// with safe_step's fallback for zero denominators.
StepSizes step_sizes(const DecomposedSdp& d, double theta);

/// Dense preconditioner
///   [ diag(alpha_i^-1 I)  -A^T        -D^T      ]
///   [ -A                  gamma^-1 I   0        ]
///   [ -D                  0            tau^-1 I ]
SymMatrix preconditioner(const DecomposedSdp& d, const StepSizes& steps);

/// x = lift(0), nu = 0, lambda = 0.
SemiState initial_state(const DecomposedSdp& d);

/// One forward-backward step:
///   x+      = proj_S(x - alpha (F + A^T nu + D^T lambda))
///   nu+     = nu + gamma (A(2x+ - x) - b)
///   lambda+ = lambda + tau D(2x+ - x)
SemiState iterate(const DecomposedSdp& d, const SemiState& s, const StepSizes& steps, bool parallel = false);

/// Runs iterate until max(r_eq, r_cons, r_stat) <= tol (1 + ||b||) at a
/// recorded iteration, or max_iter.
SolveReport solve(const DecomposedSdp& d, const SolverConfig& config);
SolveReport solve(const DecomposedSdp& d, const SolverConfig& config, const StepSizes& steps);

}  // namespace chordsdp
