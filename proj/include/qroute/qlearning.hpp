#pragma once

#include "qroute/route.hpp"
#include "qroute/telemetry.hpp"
#include "qroute/topology.hpp"
#include "qroute/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace qroute {

struct Hyperparams {
  Scalar alpha = 0.1;           // learning rate, (0,1]
  Scalar gamma = 1.0;           // discount, (0,1]; 1 makes the greedy policy the min-penalty path
  Scalar epsilon_start = 1.0;   // exploration probability at episode 0
  Scalar epsilon_end = 0.05;    // exploration floor
  Scalar epsilon_decay = 0.999; // multiplicative per-episode decay
  int episodes = 10000;         // per destination
  int max_steps_per_episode = 0;  // 0 = auto: 4 * |V|
  std::uint64_t seed = 1;

  void validate() const;
  int effective_max_steps(int node_count) const;
};

// Per-destination action values Q(s,a), dense by node index: 0 on adjacency
// pairs (optimistic under all-negative rewards), -inf elsewhere. The
// destination row stays pinned at its initial zeros; episodes terminate
// there and q_update refuses to touch it.
struct QTable {
  NodeId destination = 0;
  Matrix q;

  Scalar at(int state_index, int action_index) const;
  int size() const { return static_cast<int>(q.rows()); }
};

QTable init_qtable(const Topology& topology, NodeId destination);

// One Q(s,a) update per Eq.-style temporal difference:
//   Q(s,a) += alpha * (r + gamma * max_a' Q(s_next, a') - Q(s,a))
// with the destination's bootstrap value fixed at 0. s_next must equal a
// (transitions are deterministic) and (s,a) must be an adjacency.
void q_update(const Topology& topology, QTable& table, NodeId s, NodeId a, Scalar r,
              NodeId s_next, Scalar alpha, Scalar gamma);

struct EpisodeStep {
  NodeId state = 0;
  NodeId action = 0;
};

// One epsilon-greedy episode from start, updating table in place. Ends on
// reaching the destination or after max_steps transitions. Exploitation
// ties break toward the lowest neighbor id. The rng advances
// deterministically, so identical inputs replay identical traces.
std::vector<EpisodeStep> run_episode(const Topology& topology, const RewardMatrix& rewards,
                                     QTable& table, NodeId start, Scalar alpha, Scalar gamma,
                                     Scalar epsilon, int max_steps, std::mt19937_64& rng);

struct TrainResult {
  QTable table;
  CountMatrix visits;  // q_update count per (state, action) dense pair
  int episodes_run = 0;
};

// Runs hp.episodes episodes with start states cycling over the
// non-destination nodes in ascending order (isolated nodes are skipped: no
// action exists there). Epsilon decays multiplicatively per episode, floored
// at epsilon_end. The RNG is seeded with hp.seed ^ destination, so training
// distinct destinations is independent and order-free.
// warm_start, when given, seeds the value table instead of zeros.
TrainResult train(const Topology& topology, const RewardMatrix& rewards, NodeId destination,
                  const Hyperparams& hp, const QTable* warm_start = nullptr);

// Follow argmax-Q from src (ties toward the lowest neighbor id) until the
// destination, accumulating total_reward as the sum of R(s,a) along the
// path. A repeated node or more than max_len hops reports no_convergence
// (or unreachable, when the topology admits no path at all) instead of
// returning a looping path.
Route extract_route(const Topology& topology, const RewardMatrix& rewards, const QTable& table,
                    NodeId src, int max_len);

struct SolveOutput {
  RouteTable table;
  std::vector<TrainResult> per_destination;  // ascending destination id
};

// Train one table per destination and extract all ordered pairs.
// Deterministic given (topology, rewards, hp): per-destination sub-seeds
// make the result independent of training order.
SolveOutput solve_all_trained(const Topology& topology, const RewardMatrix& rewards,
                              const Hyperparams& hp, double snapshot_time = 0.0,
                              const std::vector<QTable>* warm_start = nullptr);

RouteTable solve_all(const Topology& topology, const RewardMatrix& rewards,
                     const Hyperparams& hp, double snapshot_time = 0.0);

}  // namespace qroute
