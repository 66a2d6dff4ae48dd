#include "qroute/qlearning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qroute {

namespace {

constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Fixed
// construction (rather than uniform_real_distribution) so traces replay
// identically across standard libraries.
inline Scalar u01(std::mt19937_64& rng) {
  return static_cast<Scalar>(rng() >> 11) * 0x1.0p-53;
}

// Highest Q(next, .) over next's neighbors. The destination row is pinned at
// its adjacency zeros, so reaching it bootstraps 0 without a special case.
inline Scalar best_next_value(const Topology& t, const Matrix& q, int next) {
  Scalar best = kNegInf;
  for (int v : t.neighbor_indices(next)) best = std::max(best, q(next, v));
  return best;
}

// Epsilon-greedy pick among s's neighbors. Exploration consumes two draws
// (gate, choice), exploitation one; the ascending neighbor order makes the
// strict-> argmax settle ties toward the lowest id.
inline int choose_action(const Topology& t, const Matrix& q, int s, Scalar epsilon,
                         std::mt19937_64& rng) {
  const std::vector<int>& nbrs = t.neighbor_indices(s);
  if (u01(rng) < epsilon) {
    size_t k = static_cast<size_t>(u01(rng) * static_cast<Scalar>(nbrs.size()));
    if (k >= nbrs.size()) k = nbrs.size() - 1;
    return nbrs[k];
  }
  int best = nbrs[0];
  Scalar bq = q(s, best);
  for (size_t j = 1; j < nbrs.size(); ++j) {
    Scalar cand = q(s, nbrs[j]);
    if (cand > bq) {
      bq = cand;
      best = nbrs[j];
    }
  }
  return best;
}

// Shared episode body. run_episode records the trace; train counts visits.
// Both consume the rng identically.
void episode_impl(const Topology& t, const Matrix& r, Matrix& q, int start, int dest,
                  Scalar alpha, Scalar gamma, Scalar epsilon, int max_steps,
                  std::mt19937_64& rng, CountMatrix* visits,
                  std::vector<EpisodeStep>* record) {
  int cur = start;
  for (int step = 0; step < max_steps && cur != dest; ++step) {
    if (t.neighbor_indices(cur).empty()) break;  // isolated start: nothing to do
    int act = choose_action(t, q, cur, epsilon, rng);
    Scalar target = r(cur, act) + gamma * best_next_value(t, q, act);
    q(cur, act) += alpha * (target - q(cur, act));
    if (visits) ++(*visits)(cur, act);
    if (record) record->push_back({t.node_at(cur), t.node_at(act)});
    cur = act;
  }
}

bool reachable(const Topology& t, int from, int to) {
  if (from == to) return true;
  std::vector<char> seen(static_cast<size_t>(t.size()), 0);
  std::vector<int> stack{from};
  seen[static_cast<size_t>(from)] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : t.neighbor_indices(u)) {
      if (seen[static_cast<size_t>(v)]) continue;
      if (v == to) return true;
      seen[static_cast<size_t>(v)] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

void check_table(const Topology& t, const QTable& table, const char* who) {
  if (!t.has_node(table.destination))
    throw std::invalid_argument(std::string(who) + ": destination " +
                                std::to_string(table.destination) + " is not in the topology");
  if (table.size() != t.size())
    throw std::invalid_argument(std::string(who) + ": table size " +
                                std::to_string(table.size()) + " does not match topology size " +
                                std::to_string(t.size()));
}

void check_rewards(const Topology& t, const RewardMatrix& rewards, const char* who) {
  if (rewards.size() != t.size())
    throw std::invalid_argument(std::string(who) + ": reward matrix size " +
                                std::to_string(rewards.size()) +
                                " does not match topology size " + std::to_string(t.size()));
}

}  // namespace

void Hyperparams::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("hyperparams: alpha must be in (0, 1]");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("hyperparams: gamma must be in (0, 1]");
  if (!(epsilon_start >= 0.0) || epsilon_start > 1.0)
    throw std::invalid_argument("hyperparams: epsilon_start must be in [0, 1]");
  if (!(epsilon_end >= 0.0) || epsilon_end > epsilon_start)
    throw std::invalid_argument("hyperparams: epsilon_end must be in [0, epsilon_start]");
  if (!(epsilon_decay > 0.0) || epsilon_decay > 1.0)
    throw std::invalid_argument("hyperparams: epsilon_decay must be in (0, 1]");
  if (episodes <= 0) throw std::invalid_argument("hyperparams: episodes must be positive");
  if (max_steps_per_episode < 0)
    throw std::invalid_argument("hyperparams: max_steps_per_episode must be >= 0");
}

int Hyperparams::effective_max_steps(int node_count) const {
  return max_steps_per_episode > 0 ? max_steps_per_episode : 4 * node_count;
}

Scalar QTable::at(int state_index, int action_index) const {
  if (state_index < 0 || state_index >= size() || action_index < 0 || action_index >= size())
    throw std::out_of_range("qtable: index out of range");
  return q(state_index, action_index);
}

QTable init_qtable(const Topology& topology, NodeId destination) {
  if (!topology.has_node(destination))
    throw std::invalid_argument("init_qtable: destination " + std::to_string(destination) +
                                " is not in the topology");
  QTable table;
  table.destination = destination;
  table.q = Matrix::Constant(topology.size(), topology.size(), kNegInf);
  for (const Link& l : topology.links()) {
    int ia = topology.index_of(l.a);
    int ib = topology.index_of(l.b);
    table.q(ia, ib) = 0.0;  // optimistic: true values are all negative
    table.q(ib, ia) = 0.0;
  }
  return table;
}

void q_update(const Topology& topology, QTable& table, NodeId s, NodeId a, Scalar r,
              NodeId s_next, Scalar alpha, Scalar gamma) {
  check_table(topology, table, "q_update");
  int si = topology.index_of(s);
  int ai = topology.index_of(a);
  if (s == table.destination)
    throw std::invalid_argument("q_update: the destination row is pinned");
  if (topology.find_link(s, a) < 0)
    throw std::invalid_argument("q_update: " + std::to_string(s) + " and " + std::to_string(a) +
                                " are not adjacent");
  if (s_next != a)
    throw std::invalid_argument("q_update: transitions are deterministic; s_next must equal a");
  if (!std::isfinite(r)) throw std::invalid_argument("q_update: reward must be finite");
  if (!(alpha >= 0.0) || alpha > 1.0)
    throw std::invalid_argument("q_update: alpha must be in [0, 1]");
  if (!(gamma >= 0.0) || gamma > 1.0)
    throw std::invalid_argument("q_update: gamma must be in [0, 1]");

  Scalar target = r + gamma * best_next_value(topology, table.q, ai);
  table.q(si, ai) += alpha * (target - table.q(si, ai));
}

std::vector<EpisodeStep> run_episode(const Topology& topology, const RewardMatrix& rewards,
                                     QTable& table, NodeId start, Scalar alpha, Scalar gamma,
                                     Scalar epsilon, int max_steps, std::mt19937_64& rng) {
  check_table(topology, table, "run_episode");
  check_rewards(topology, rewards, "run_episode");
  if (!(epsilon >= 0.0) || epsilon > 1.0)
    throw std::invalid_argument("run_episode: epsilon must be in [0, 1]");
  if (max_steps < 0) throw std::invalid_argument("run_episode: max_steps must be >= 0");
  int start_index = topology.index_of(start);
  int dest_index = topology.index_of(table.destination);
  if (start_index == dest_index)
    throw std::invalid_argument("run_episode: start equals the destination");
  if (topology.neighbor_indices(start_index).empty())
    throw std::invalid_argument("run_episode: start " + std::to_string(start) +
                                " has no neighbors");

  std::vector<EpisodeStep> trace;
  episode_impl(topology, rewards.r, table.q, start_index, dest_index, alpha, gamma, epsilon,
               max_steps, rng, nullptr, &trace);
  return trace;
}

TrainResult train(const Topology& topology, const RewardMatrix& rewards, NodeId destination,
                  const Hyperparams& hp, const QTable* warm_start) {
  hp.validate();
  check_rewards(topology, rewards, "train");
  if (!topology.has_node(destination))
    throw std::invalid_argument("train: destination " + std::to_string(destination) +
                                " is not in the topology");
  TrainResult out;
  if (warm_start) {
    if (warm_start->destination != destination)
      throw std::invalid_argument("train: warm start is for destination " +
                                  std::to_string(warm_start->destination) + ", not " +
                                  std::to_string(destination));
    check_table(topology, *warm_start, "train");
    out.table = *warm_start;
  } else {
    out.table = init_qtable(topology, destination);
  }
  out.visits = CountMatrix::Zero(topology.size(), topology.size());

  int dest_index = topology.index_of(destination);
  std::vector<int> starts;
  for (int i = 0; i < topology.size(); ++i)
    if (i != dest_index && !topology.neighbor_indices(i).empty()) starts.push_back(i);

  // Per-destination sub-seed: tables are independent of training order.
  std::mt19937_64 rng(hp.seed ^ static_cast<std::uint64_t>(destination));
  int max_steps = hp.effective_max_steps(topology.size());
  Scalar epsilon = hp.epsilon_start;
  for (int e = 0; e < hp.episodes && !starts.empty(); ++e) {
    int start = starts[static_cast<size_t>(e) % starts.size()];
    episode_impl(topology, rewards.r, out.table.q, start, dest_index, hp.alpha, hp.gamma,
                 epsilon, max_steps, rng, &out.visits, nullptr);
    epsilon = std::max(hp.epsilon_end, epsilon * hp.epsilon_decay);
    ++out.episodes_run;
  }
  return out;
}

Route extract_route(const Topology& topology, const RewardMatrix& rewards, const QTable& table,
                    NodeId src, int max_len) {
  check_table(topology, table, "extract_route");
  check_rewards(topology, rewards, "extract_route");
  if (max_len < 0) throw std::invalid_argument("extract_route: max_len must be >= 0");
  int src_index = topology.index_of(src);
  int dest_index = topology.index_of(table.destination);
  if (src_index == dest_index) return Route{{src}, 0.0, RouteStatus::ok};

  Route r;
  r.path.push_back(src);
  std::vector<char> seen(static_cast<size_t>(topology.size()), 0);
  seen[static_cast<size_t>(src_index)] = 1;
  int cur = src_index;
  while (true) {
    const std::vector<int>& nbrs = topology.neighbor_indices(cur);
    if (nbrs.empty() || static_cast<int>(r.path.size()) - 1 >= max_len) break;
    int best = nbrs[0];
    Scalar bq = table.q(cur, best);
    for (size_t j = 1; j < nbrs.size(); ++j) {
      Scalar cand = table.q(cur, nbrs[j]);
      if (cand > bq) {
        bq = cand;
        best = nbrs[j];
      }
    }
    r.total_reward += rewards.r(cur, best);
    r.path.push_back(topology.node_at(best));
    cur = best;
    if (cur == dest_index) return r;
    if (seen[static_cast<size_t>(cur)]) break;  // revisit: the greedy policy loops
    seen[static_cast<size_t>(cur)] = 1;
  }
  Route bad;
  bad.status = reachable(topology, src_index, dest_index) ? RouteStatus::no_convergence
                                                          : RouteStatus::unreachable;
  return bad;
}

SolveOutput solve_all_trained(const Topology& topology, const RewardMatrix& rewards,
                              const Hyperparams& hp, double snapshot_time,
                              const std::vector<QTable>* warm_start) {
  hp.validate();
  check_rewards(topology, rewards, "solve_all_trained");
  if (warm_start && static_cast<int>(warm_start->size()) != topology.size())
    throw std::invalid_argument("solve_all_trained: warm start must hold one table per node");

  SolveOutput out;
  out.table.nodes = topology.nodes();
  out.table.snapshot_time = snapshot_time;
  int max_len = hp.effective_max_steps(topology.size());
  for (int di = 0; di < topology.size(); ++di) {
    NodeId dst = topology.node_at(di);
    const QTable* ws = warm_start ? &(*warm_start)[static_cast<size_t>(di)] : nullptr;
    TrainResult res = train(topology, rewards, dst, hp, ws);
    for (int si = 0; si < topology.size(); ++si) {
      if (si == di) continue;
      NodeId src = topology.node_at(si);
      out.table.routes[{src, dst}] = extract_route(topology, rewards, res.table, src, max_len);
    }
    out.per_destination.push_back(std::move(res));
  }
  return out;
}

RouteTable solve_all(const Topology& topology, const RewardMatrix& rewards, const Hyperparams& hp,
                     double snapshot_time) {
  return solve_all_trained(topology, rewards, hp, snapshot_time).table;
}

}  // namespace qroute
