#pragma once

// Per-agent arithmetic shared by both solvers, so that a single-agent
// distributed run reproduces the semi-decentralized trajectory bit for bit.

#include <algorithm>
#include <chrono>
#include <span>
#include <vector>

#include "chordsdp/decomposition.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp::detail {

/// out = proj_{S_i}(x_i - alpha (c_i + A_i^T nu + D_i^T lambda))
inline void primal_update(const AgentData& agent, std::span<const double> xi, std::span<const double> nu,
                          std::span<const double> lambda, double alpha, std::span<double> out) {
  std::vector<double> g(agent.cost);
  agent.constraints.multiply_transpose_add(nu, g);
  agent.consistency.multiply_transpose_add(lambda, g);
  for (std::size_t c = 0; c < g.size(); ++c) g[c] = xi[c] - alpha * g[c];
  const std::vector<double> projected = proj_psd_vec(g);
  std::copy(projected.begin(), projected.end(), out.begin());
}

/// 2 x+ - x
inline std::vector<double> extrapolate(std::span<const double> next, std::span<const double> prev) {
  std::vector<double> w(next.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = 2.0 * next[c] - prev[c];
  return w;
}

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace chordsdp::detail
