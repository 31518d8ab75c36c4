#include "chordsdp/pfb_distributed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include "chordsdp/errors.hpp"
#include "chordsdp/pfb_semi.hpp"
#include "kernels.hpp"

namespace chordsdp {

DistStepSizes dist_step_sizes(const DecomposedSdp& d, const CliqueGraph& cg, double theta) {
  if (cg.size() != d.agent_count()) throw DimensionMismatch("dist_step_sizes: clique graph does not match agents");
  DistStepSizes s;
  s.theta = theta;
  s.alpha = step_sizes(d, theta).alpha;
  const double aux = safe_step(theta, 2.0 * cg.max_weighted_degree());
  for (std::size_t i = 0; i < d.agent_count(); ++i) {
    const double degree = cg.weighted_degree(i);
    s.sigma.push_back(aux);
    s.eta.push_back(aux);
    s.gamma.push_back(safe_step(theta, d.agents[i].constraints.max_abs_row_sum() + 2.0 * degree));
    s.tau.push_back(safe_step(theta, d.agents[i].consistency.max_abs_row_sum() + 2.0 * degree));
  }
  return s;
}

SymMatrix distributed_preconditioner(const DecomposedSdp& d, const CliqueGraph& cg, const DistStepSizes& steps) {
  const std::size_t n_agents = d.agent_count();
  const std::size_t m = d.m;
  const std::size_t p = d.p;
  const std::size_t z0 = d.nhat;
  const std::size_t y0 = z0 + n_agents * m;
  const std::size_t v0 = y0 + n_agents * p;
  const std::size_t l0 = v0 + n_agents * m;
  SymMatrix phi(l0 + n_agents * p);
  const SymMatrix lap = cg.laplacian();

  for (std::size_t i = 0; i < n_agents; ++i) {
    const AgentData& a = d.agents[i];
    for (std::size_t c = 0; c < a.vec_size(); ++c) phi.set(d.offsets[i] + c, d.offsets[i] + c, 1.0 / steps.alpha[i]);
    for (std::size_t k = 0; k < m; ++k) {
      phi.set(z0 + i * m + k, z0 + i * m + k, 1.0 / steps.sigma[i]);
      phi.set(v0 + i * m + k, v0 + i * m + k, 1.0 / steps.gamma[i]);
      for (std::size_t c = 0; c < a.vec_size(); ++c)
        if (a.constraints(k, c) != 0.0) phi.set(v0 + i * m + k, d.offsets[i] + c, -a.constraints(k, c));
    }
    for (std::size_t r = 0; r < p; ++r) {
      phi.set(y0 + i * p + r, y0 + i * p + r, 1.0 / steps.eta[i]);
      phi.set(l0 + i * p + r, l0 + i * p + r, 1.0 / steps.tau[i]);
    }
    a.consistency.for_each([&](std::size_t r, std::size_t c, double v) { phi.set(l0 + i * p + r, d.offsets[i] + c, -v); });

    for (std::size_t j = 0; j < n_agents; ++j) {
      const double lij = lap(i, j);
      if (lij == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) phi.set(z0 + i * m + k, v0 + j * m + k, lij);
      for (std::size_t r = 0; r < p; ++r) phi.set(y0 + i * p + r, l0 + j * p + r, lij);
    }
  }
  return phi;
}

Agent::Agent(const AgentData& data, std::vector<Link> links, std::vector<double> rhs_share, double alpha,
             double sigma, double eta, double gamma, double tau, std::size_t p)
    : data_(&data),
      links_(std::move(links)),
      rhs_share_(std::move(rhs_share)),
      alpha_(alpha),
      sigma_(sigma),
      eta_(eta),
      gamma_(gamma),
      tau_(tau) {
  const std::size_t m = rhs_share_.size();
  state_ = AgentState{std::vector<double>(data.vec_size(), 0.0), std::vector<double>(m, 0.0),
                      std::vector<double>(p, 0.0), std::vector<double>(m, 0.0), std::vector<double>(p, 0.0)};
  laplacian_nu_.assign(m, 0.0);
  laplacian_lambda_.assign(p, 0.0);
  neighbor_z_.assign(links_.size(), std::vector<double>(m, 0.0));
  neighbor_y_.assign(links_.size(), std::vector<double>(p, 0.0));
  dz_.assign(m, 0.0);
  dy_.assign(p, 0.0);
}

void Agent::reset(AgentState s) {
  if (s.x.size() != state_.x.size() || s.z.size() != state_.z.size() || s.y.size() != state_.y.size() ||
      s.nu.size() != state_.nu.size() || s.lambda.size() != state_.lambda.size())
    throw DimensionMismatch("Agent::reset: state lengths do not match");
  state_ = std::move(s);
}

DualMessage Agent::dual_message() const { return DualMessage{index(), state_.nu, state_.lambda}; }

AuxMessage Agent::aux_message() const { return AuxMessage{index(), state_.z, state_.y}; }

template <typename Message>
std::vector<const Message*> Agent::match(std::span<const Message> received) const {
  std::vector<const Message*> by_link(links_.size(), nullptr);
  for (const Message& msg : received) {
    const auto it = std::find_if(links_.begin(), links_.end(), [&](const Link& l) { return l.index == msg.from; });
    if (it == links_.end()) {
      throw UnexpectedPayload("agent " + std::to_string(index() + 1) + ": message from non-neighbor " +
                              std::to_string(msg.from + 1));
    }
    auto& slot = by_link[static_cast<std::size_t>(it - links_.begin())];
    if (slot != nullptr) {
      throw UnexpectedPayload("agent " + std::to_string(index() + 1) + ": duplicate message from " +
                              std::to_string(msg.from + 1));
    }
    slot = &msg;
  }
  for (std::size_t l = 0; l < links_.size(); ++l) {
    if (by_link[l] == nullptr) {
      throw MissingNeighborPayload("agent " + std::to_string(index() + 1) + ": no payload from neighbor " +
                                   std::to_string(links_[l].index + 1));
    }
  }
  return by_link;
}

void Agent::prime(std::span<const AuxMessage> received) {
  const auto by_link = match(received);
  for (std::size_t l = 0; l < links_.size(); ++l) {
    neighbor_z_[l] = by_link[l]->z;
    neighbor_y_[l] = by_link[l]->y;
  }
}

void Agent::local_update_s1(std::span<const DualMessage> received) {
  const auto by_link = match(received);
  const std::size_t m = state_.nu.size();
  const std::size_t p = state_.lambda.size();
  for (const DualMessage* msg : by_link)
    if (msg->nu.size() != m || msg->lambda.size() != p) throw DimensionMismatch("local_update_s1: payload length");

  x_prev_ = state_.x;
  detail::primal_update(*data_, x_prev_, state_.nu, state_.lambda, alpha_, state_.x);

  std::fill(laplacian_nu_.begin(), laplacian_nu_.end(), 0.0);
  std::fill(laplacian_lambda_.begin(), laplacian_lambda_.end(), 0.0);
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const double w = links_[l].weight;
    for (std::size_t k = 0; k < m; ++k) laplacian_nu_[k] += w * (state_.nu[k] - by_link[l]->nu[k]);
    for (std::size_t r = 0; r < p; ++r) laplacian_lambda_[r] += w * (state_.lambda[r] - by_link[l]->lambda[r]);
  }
  z_prev_ = state_.z;
  y_prev_ = state_.y;
  for (std::size_t k = 0; k < m; ++k) {
    state_.z[k] = z_prev_[k] + sigma_ * laplacian_nu_[k];
    dz_[k] = state_.z[k] - z_prev_[k];
  }
  for (std::size_t r = 0; r < p; ++r) {
    state_.y[r] = y_prev_[r] + eta_ * laplacian_lambda_[r];
    dy_[r] = state_.y[r] - y_prev_[r];
  }
}

void Agent::local_update_s2(std::span<const AuxMessage> received) {
  const auto by_link = match(received);
  const std::size_t m = state_.nu.size();
  const std::size_t p = state_.lambda.size();
  for (const AuxMessage* msg : by_link)
    if (msg->z.size() != m || msg->y.size() != p) throw DimensionMismatch("local_update_s2: payload length");

  const std::vector<double> w = detail::extrapolate(state_.x, x_prev_);
  std::vector<double> aw(m), dw(p);
  data_->constraints.multiply(w, aw);
  data_->consistency.multiply(w, dw);

  for (std::size_t k = 0; k < m; ++k) {
    double aux = 0.0;
    for (std::size_t l = 0; l < links_.size(); ++l) {
      aux += links_[l].weight *
             (2.0 * (state_.z[k] - by_link[l]->z[k]) - (z_prev_[k] - neighbor_z_[l][k]));
    }
    state_.nu[k] += gamma_ * (aw[k] - rhs_share_[k] - aux - laplacian_nu_[k]);
  }
  for (std::size_t r = 0; r < p; ++r) {
    double aux = 0.0;
    for (std::size_t l = 0; l < links_.size(); ++l) {
      aux += links_[l].weight *
             (2.0 * (state_.y[r] - by_link[l]->y[r]) - (y_prev_[r] - neighbor_y_[l][r]));
    }
    state_.lambda[r] += tau_ * (dw[r] - aux - laplacian_lambda_[r]);
  }
  for (std::size_t l = 0; l < links_.size(); ++l) {
    neighbor_z_[l] = by_link[l]->z;
    neighbor_y_[l] = by_link[l]->y;
  }
}

DistributedNetwork::DistributedNetwork(const DecomposedSdp& d, const CliqueGraph& cg, const DistStepSizes& steps)
    : d_(&d), cg_(&cg) {
  const std::size_t n_agents = d.agent_count();
  if (cg.size() != n_agents) throw DimensionMismatch("DistributedNetwork: clique graph does not match agents");
  if (steps.alpha.size() != n_agents || steps.sigma.size() != n_agents || steps.eta.size() != n_agents ||
      steps.gamma.size() != n_agents || steps.tau.size() != n_agents)
    throw DimensionMismatch("DistributedNetwork: step sizes do not match agents");

  std::vector<double> share(d.m);
  for (std::size_t k = 0; k < d.m; ++k) share[k] = d.rhs[k] / static_cast<double>(n_agents);

  agents_.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    std::vector<Agent::Link> links;
    for (const auto& nb : cg.neighbors[i]) links.push_back({nb.index, nb.weight});
    agents_.emplace_back(d.agents[i], std::move(links), share, steps.alpha[i], steps.sigma[i], steps.eta[i],
                         steps.gamma[i], steps.tau[i], d.p);
  }
  for (auto& a : agents_) {
    std::vector<AuxMessage> inbox;
    for (const auto& l : a.links()) inbox.push_back(agents_[l.index].aux_message());
    a.prime(inbox);
  }
}

void DistributedNetwork::round(bool parallel, RoundTiming* timing) {
  const std::size_t n_agents = agents_.size();
  std::vector<double> agent_ms(n_agents, 0.0);

  auto run = [&](auto&& work) {
    if (parallel) {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n_agents), [&](const auto& range) {
        for (std::size_t i = range.begin(); i != range.end(); ++i) work(i);
      });
    } else {
      for (std::size_t i = 0; i < n_agents; ++i) work(i);
    }
  };

  std::vector<DualMessage> duals;
  duals.reserve(n_agents);
  for (const auto& a : agents_) duals.push_back(a.dual_message());
  run([&](std::size_t i) {
    const auto start = detail::Clock::now();
    std::vector<DualMessage> inbox;
    for (const auto& l : agents_[i].links()) inbox.push_back(duals[l.index]);
    agents_[i].local_update_s1(inbox);
    agent_ms[i] += detail::elapsed_ms(start);
  });

  std::vector<AuxMessage> aux;
  aux.reserve(n_agents);
  for (const auto& a : agents_) aux.push_back(a.aux_message());
  run([&](std::size_t i) {
    const auto start = detail::Clock::now();
    std::vector<AuxMessage> inbox;
    for (const auto& l : agents_[i].links()) inbox.push_back(aux[l.index]);
    agents_[i].local_update_s2(inbox);
    agent_ms[i] += detail::elapsed_ms(start);
  });

  if (timing != nullptr) timing->agent_ms = std::move(agent_ms);
}

std::vector<AgentState> DistributedNetwork::states() const {
  std::vector<AgentState> out;
  out.reserve(agents_.size());
  for (const auto& a : agents_) out.push_back(a.state());
  return out;
}

std::vector<double> DistributedNetwork::stacked_x() const {
  std::vector<double> x;
  x.reserve(d_->nhat);
  for (const auto& a : agents_) x.insert(x.end(), a.state().x.begin(), a.state().x.end());
  return x;
}

std::vector<double> DistributedNetwork::average_nu() const {
  std::vector<double> avg(d_->m, 0.0);
  for (const auto& a : agents_)
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += a.state().nu[k];
  for (double& v : avg) v /= static_cast<double>(agents_.size());
  return avg;
}

std::vector<double> DistributedNetwork::average_lambda() const {
  std::vector<double> avg(d_->p, 0.0);
  for (const auto& a : agents_)
    for (std::size_t r = 0; r < avg.size(); ++r) avg[r] += a.state().lambda[r];
  for (double& v : avg) v /= static_cast<double>(agents_.size());
  return avg;
}

double DistributedNetwork::z_conservation() const {
  std::vector<double> sum(d_->m, 0.0);
  for (const auto& a : agents_)
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += a.z_change()[k];
  return norm_inf(sum);
}

double DistributedNetwork::y_conservation() const {
  std::vector<double> sum(d_->p, 0.0);
  for (const auto& a : agents_)
    for (std::size_t r = 0; r < sum.size(); ++r) sum[r] += a.y_change()[r];
  return norm_inf(sum);
}

double consensus_residual(const CliqueGraph& cg, std::span<const AgentState> states) {
  if (states.size() != cg.size()) throw DimensionMismatch("consensus_residual: state count mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& nb : cg.neighbors[i]) {
      const AgentState& a = states[i];
      const AgentState& b = states[nb.index];
      for (std::size_t k = 0; k < a.nu.size(); ++k) worst = std::max(worst, std::abs(a.nu[k] - b.nu[k]));
      for (std::size_t r = 0; r < a.lambda.size(); ++r)
        worst = std::max(worst, std::abs(a.lambda[r] - b.lambda[r]));
    }
  }
  return worst;
}

DistributedReport solve_distributed(const DecomposedSdp& d, const CliqueGraph& cg, const SolverConfig& config) {
  return solve_distributed(d, cg, config, dist_step_sizes(d, cg, config.theta));
}

DistributedReport solve_distributed(const DecomposedSdp& d, const CliqueGraph& cg, const SolverConfig& config,
                                    const DistStepSizes& steps) {
  const double threshold = config.tol * (1.0 + norm2(d.rhs));
  const std::size_t record_every = std::max<std::size_t>(1, config.record_every);

  DistributedNetwork net(d, cg, steps);
  DistributedReport out;
  SolveReport& report = out.summary;

  auto measure = [&]() {
    const std::vector<AgentState> states = net.states();
    report.residuals = kkt_residual(d, net.stacked_x(), net.average_nu(), net.average_lambda());
    report.consensus = consensus_residual(cg, states);
    return std::max(report.residuals.max(), report.consensus);
  };

  if (measure() <= threshold) {
    report.termination = Termination::Converged;
  } else {
    RoundTiming timing;
    for (std::size_t k = 1; k <= config.max_iter; ++k) {
      const auto start = detail::Clock::now();
      net.round(config.parallel, &timing);
      report.iteration_ms.push_back(detail::elapsed_ms(start));
      report.parallel_ms.push_back(*std::max_element(timing.agent_ms.begin(), timing.agent_ms.end()));
      report.iterations = k;
      const double z_sum = net.z_conservation();
      const double y_sum = net.y_conservation();
      out.max_conservation = std::max({out.max_conservation, z_sum, y_sum});

      if ((k - 1) % record_every != 0) continue;
      const double worst = measure();
      const auto& r = report.residuals;
      report.trace.push_back(
          {k, r.equality, r.consistency, r.stationarity, report.consensus, d.objective(net.stacked_x())});
      out.conservation.push_back({k, z_sum, y_sum});
      if (worst <= threshold) {
        report.termination = Termination::Converged;
        break;
      }
    }
    if (report.termination != Termination::Converged) measure();
  }

  report.x = net.stacked_x();
  report.nu = net.average_nu();
  report.lambda = net.average_lambda();
  report.objective = d.objective(report.x);
  out.agents = net.states();
  return out;
}

}  // namespace chordsdp
