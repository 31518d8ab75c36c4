#include "chordsdp/pfb_semi.hpp"

#include <algorithm>
#include <cmath>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include "chordsdp/errors.hpp"
#include "kernels.hpp"

namespace chordsdp {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

double safe_step(double theta, double denominator) {
  constexpr double eps = 1e-12;
  return denominator > eps ? theta / denominator : theta;
}

StepSizes step_sizes(const DecomposedSdp& d, double theta) {
  StepSizes s;
  s.theta = theta;
  for (const auto& agent : d.agents) {
    const auto a_cols = agent.constraints.abs_column_sums();
    const auto d_cols = agent.consistency.abs_column_sums();
    double worst = 0.0;
    for (std::size_t c = 0; c < a_cols.size(); ++c) worst = std::max(worst, a_cols[c] + d_cols[c]);
    s.alpha.push_back(safe_step(theta, worst));
  }
  s.gamma = safe_step(theta, d.stacked_constraints().max_abs_row_sum());
  s.tau = safe_step(theta, d.stacked_consistency().max_abs_row_sum());
  return s;
}

SymMatrix preconditioner(const DecomposedSdp& d, const StepSizes& steps) {
  const std::size_t nx = d.nhat;
  const std::size_t dim = nx + d.m + d.p;
  SymMatrix phi(dim);
  for (std::size_t i = 0; i < d.agent_count(); ++i)
    for (std::size_t c = 0; c < d.agents[i].vec_size(); ++c)
      phi.set(d.offsets[i] + c, d.offsets[i] + c, 1.0 / steps.alpha[i]);
  for (std::size_t k = 0; k < d.m; ++k) phi.set(nx + k, nx + k, 1.0 / steps.gamma);
  for (std::size_t r = 0; r < d.p; ++r) phi.set(nx + d.m + r, nx + d.m + r, 1.0 / steps.tau);

  const DenseMatrix a = d.stacked_constraints();
  for (std::size_t k = 0; k < d.m; ++k)
    for (std::size_t c = 0; c < nx; ++c)
      if (a(k, c) != 0.0) phi.set(nx + k, c, -a(k, c));
  d.stacked_consistency().for_each(
      [&](std::size_t r, std::size_t c, double v) { phi.set(nx + d.m + r, c, -v); });
  return phi;
}

SemiState initial_state(const DecomposedSdp& d) {
  return SemiState{std::vector<double>(d.nhat, 0.0), std::vector<double>(d.m, 0.0), std::vector<double>(d.p, 0.0), 0};
}

namespace {

void check_state(const DecomposedSdp& d, const SemiState& s, const StepSizes& steps) {
  if (s.x.size() != d.nhat || s.nu.size() != d.m || s.lambda.size() != d.p)
    throw DimensionMismatch("iterate: state does not match the decomposed problem");
  if (steps.alpha.size() != d.agent_count()) throw DimensionMismatch("iterate: one alpha per agent required");
}

/// One iteration into `next`; agent_ms[i] receives agent i's compute time and
/// the return value is the coordinator's time.
double advance(const DecomposedSdp& d, const SemiState& s, const StepSizes& steps, bool parallel, SemiState& next,
               std::vector<double>& agent_ms) {
  next.x.resize(d.nhat);
  agent_ms.resize(d.agent_count());
  auto update_agent = [&](std::size_t i) {
    const auto start = detail::Clock::now();
    detail::primal_update(d.agents[i], d.slice(std::span<const double>(s.x), i), s.nu, s.lambda, steps.alpha[i],
                          d.slice(std::span<double>(next.x), i));
    agent_ms[i] = detail::elapsed_ms(start);
  };
  if (parallel) {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, d.agent_count()), [&](const auto& range) {
      for (std::size_t i = range.begin(); i != range.end(); ++i) update_agent(i);
    });
  } else {
    for (std::size_t i = 0; i < d.agent_count(); ++i) update_agent(i);
  }

  const auto start = detail::Clock::now();
  const std::vector<double> w = detail::extrapolate(next.x, s.x);
  const std::vector<double> aw = d.apply_constraints(w);
  const std::vector<double> dw = d.apply_consistency(w);
  next.nu.resize(d.m);
  next.lambda.resize(d.p);
  for (std::size_t k = 0; k < d.m; ++k) next.nu[k] = s.nu[k] + steps.gamma * (aw[k] - d.rhs[k]);
  for (std::size_t r = 0; r < d.p; ++r) next.lambda[r] = s.lambda[r] + steps.tau * dw[r];
  next.iteration = s.iteration + 1;
  return detail::elapsed_ms(start);
}

}  // namespace

SemiState iterate(const DecomposedSdp& d, const SemiState& s, const StepSizes& steps, bool parallel) {
  check_state(d, s, steps);
  SemiState next;
  std::vector<double> agent_ms;
  advance(d, s, steps, parallel, next, agent_ms);
  return next;
}

SolveReport solve(const DecomposedSdp& d, const SolverConfig& config) {
  return solve(d, config, step_sizes(d, config.theta));
}

SolveReport solve(const DecomposedSdp& d, const SolverConfig& config, const StepSizes& steps) {
  const double threshold = config.tol * (1.0 + norm2(d.rhs));
  const std::size_t record_every = std::max<std::size_t>(1, config.record_every);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SolveReport report;
  SemiState state = initial_state(d);
  check_state(d, state, steps);
  SemiState next;
  std::vector<double> agent_ms;

  report.residuals = kkt_residual(d, state.x, state.nu, state.lambda);
  if (report.residuals.max() <= threshold) {
    report.termination = Termination::Converged;
  } else {
    for (std::size_t k = 1; k <= config.max_iter; ++k) {
      const auto start = detail::Clock::now();
      const double coordinator_ms = advance(d, state, steps, config.parallel, next, agent_ms);
      report.iteration_ms.push_back(detail::elapsed_ms(start));
      report.parallel_ms.push_back(*std::max_element(agent_ms.begin(), agent_ms.end()) + coordinator_ms);
      std::swap(state, next);
      report.iterations = k;

      if ((k - 1) % record_every != 0) continue;
      report.residuals = kkt_residual(d, state.x, state.nu, state.lambda);
      const auto& r = report.residuals;
      report.trace.push_back({k, r.equality, r.consistency, r.stationarity, nan, d.objective(state.x)});
      if (r.max() <= threshold) {
        report.termination = Termination::Converged;
        break;
      }
    }
    if (report.termination != Termination::Converged)
      report.residuals = kkt_residual(d, state.x, state.nu, state.lambda);
  }
  report.objective = d.objective(state.x);
  report.x = std::move(state.x);
  report.nu = std::move(state.nu);
  report.lambda = std::move(state.lambda);
  return report;
}

}  // namespace chordsdp
