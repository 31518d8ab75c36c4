#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chordsdp/decomposition.hpp"
#include "chordsdp/graph.hpp"
#include "chordsdp/solve_report.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// Local state of one agent: its primal block, auxiliary consensus variables
/// and its own copies of both multipliers.
struct AgentState {
  std::vector<double> x;       // n_i^2
  std::vector<double> z;       // m
  std::vector<double> y;       // p
  std::vector<double> nu;      // m
  std::vector<double> lambda;  // p
};

struct DistStepSizes {
  std::vector<double> alpha;
  std::vector<double> sigma;
  std::vector<double> eta;
  std::vector<double> gamma;
  std::vector<double> tau;
  double theta = 0.0;
};

/// Gershgorin-certified step sizes for the augmented preconditioner. alpha_i as
/// in step_sizes; gamma_i = theta / (a_i + 2 d_i) and tau_i = theta / (e_i + 2 d_i)
/// with a_i, e_i the max abs row sums of A_i, D_i and d_i the weighted degree.
/// sigma and eta use the largest degree, theta / (2 max_j d_j), for every agent so
/// that the auxiliary updates sum to zero across the network.
DistStepSizes dist_step_sizes(const DecomposedSdp& d, const CliqueGraph& cg, double theta);

/// Dense augmented preconditioner over (x, z, y, nu, lambda), agent-major within
/// each group.
SymMatrix distributed_preconditioner(const DecomposedSdp& d, const CliqueGraph& cg, const DistStepSizes& steps);

/// Phase-1 payload: the sender's current multiplier copies.
struct DualMessage {
  std::size_t from;
  std::vector<double> nu;
  std::vector<double> lambda;
};

/// Phase-2 payload: the sender's freshly updated auxiliary variables.
struct AuxMessage {
  std::size_t from;
  std::vector<double> z;
  std::vector<double> y;
};

/// One agent of the network. Updates read only the agent's own data and the
/// payloads handed to them.
class Agent {
 public:
  struct Link {
    std::size_t index;
    double weight;
  };

  Agent(const AgentData& data, std::vector<Link> links, std::vector<double> rhs_share, double alpha, double sigma,
        double eta, double gamma, double tau, std::size_t p);

  std::size_t index() const { return data_->index; }
  const std::vector<Link>& links() const { return links_; }
  const AgentState& state() const { return state_; }

  /// Replaces the local state, e.g. for a warm start. Throws DimensionMismatch.
  void reset(AgentState s);

  DualMessage dual_message() const;
  AuxMessage aux_message() const;

  /// Records the neighbors' initial z, y so the first S2 can difference them.
  void prime(std::span<const AuxMessage> received);

  /// S1: x, z, y from the neighbors' nu^k, lambda^k.
  /// Throws MissingNeighborPayload / UnexpectedPayload.
  void local_update_s1(std::span<const DualMessage> received);

  /// S2: nu, lambda from the neighbors' z^{k+1}, y^{k+1} and the values cached
  /// during S1 and the previous round.
  void local_update_s2(std::span<const AuxMessage> received);

  /// z^{k+1} - z^k and y^{k+1} - y^k of the last S1.
  const std::vector<double>& z_change() const { return dz_; }
  const std::vector<double>& y_change() const { return dy_; }

 private:
  template <typename Message>
  std::vector<const Message*> match(std::span<const Message> received) const;

  const AgentData* data_;
  std::vector<Link> links_;
  std::vector<double> rhs_share_;
  double alpha_, sigma_, eta_, gamma_, tau_;
  AgentState state_;

  std::vector<double> x_prev_, z_prev_, y_prev_;
  std::vector<double> laplacian_nu_, laplacian_lambda_;  // sum_j w_ij (nu_i - nu_j) at round k
  std::vector<std::vector<double>> neighbor_z_, neighbor_y_;  // per link, previous round
  std::vector<double> dz_, dy_;
};

struct RoundTiming {
  std::vector<double> agent_ms;  // S1 + S2 per agent
};

/// Synchronous two-phase rounds over the clique graph: every agent runs S1,
/// barrier, every agent runs S2, barrier.
class DistributedNetwork {
 public:
  DistributedNetwork(const DecomposedSdp& d, const CliqueGraph& cg, const DistStepSizes& steps);

  std::size_t size() const { return agents_.size(); }
  const Agent& agent(std::size_t i) const { return agents_[i]; }

  void round(bool parallel = false, RoundTiming* timing = nullptr);

  std::vector<AgentState> states() const;
  std::vector<double> stacked_x() const;
  std::vector<double> average_nu() const;
  std::vector<double> average_lambda() const;

  /// max_i |sum_i dz_i|_inf and the same for y, over the last round.
  double z_conservation() const;
  double y_conservation() const;

 private:
  const DecomposedSdp* d_;
  const CliqueGraph* cg_;
  std::vector<Agent> agents_;
};

/// max over neighbor pairs of max(|nu_i - nu_j|_inf, |lambda_i - lambda_j|_inf).
double consensus_residual(const CliqueGraph& cg, std::span<const AgentState> states);

struct ConservationSample {
  std::size_t iter;
  double z_sum;  // |sum_i dz_i|_inf
  double y_sum;
};

struct DistributedReport {
  SolveReport summary;
  std::vector<AgentState> agents;
  std::vector<ConservationSample> conservation;  // one per trace row
  double max_conservation = 0.0;                 // over every round
};

/// Runs rounds until max(r_eq, r_cons, r_stat, r_consensus) <= tol (1 + ||b||),
/// with r_stat taken at the averaged multipliers.
DistributedReport solve_distributed(const DecomposedSdp& d, const CliqueGraph& cg, const SolverConfig& config);
DistributedReport solve_distributed(const DecomposedSdp& d, const CliqueGraph& cg, const SolverConfig& config,
                                    const DistStepSizes& steps);

}  // namespace chordsdp
