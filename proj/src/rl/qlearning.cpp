#include <algorithm>
#include <cmath>

#include "alstl/kernels.hpp"
#include "alstl/perf_graph.hpp"
#include "alstl/rl.hpp"

namespace alstl::rl {

double EpsilonSchedule::at(long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return floor;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return initial + (floor - initial) * frac;
}

void validate(const QParams& p) {
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw RlError("gamma must lie in (0, 1)");
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) throw RlError("learning rate must lie in (0, 1]");
  if (!(p.epsilon.floor > 0.0) || p.epsilon.floor > 1.0) throw RlError("epsilon floor must lie in (0, 1]");
  if (p.epsilon.initial < p.epsilon.floor || p.epsilon.initial > 1.0) throw RlError("epsilon initial must lie in [floor, 1]");
}

QTable::QTable(int states, int actions, QParams params)
    : states_(states), actions_(actions), params_(params), values_(static_cast<std::size_t>(states) * actions, 0.0) {
  if (states <= 0 || actions <= 0) throw RlError("Q-table needs at least one state and one action");
  validate(params_);
}

std::size_t QTable::index(int s, int a) const {
  if (s < 0 || s >= states_ || a < 0 || a >= actions_) throw RlError("Q-table index out of range");
  return static_cast<std::size_t>(s) * actions_ + a;
}

int greedy_action(const QTable& q, StateId s) {
  const auto row = q.row(s);
  int best = 0;
  for (int a = 1; a < static_cast<int>(row.size()); ++a) {
    if (row[a] > row[best]) best = a;
  }
  return best;
}

env::Policy greedy_policy(const QTable& q) {
  return [&q](StateId s) { return static_cast<Action>(greedy_action(q, s)); };
}

std::vector<int> argmax_set(std::span<const double> row, double tol) {
  const double hi = kernels::reduce_max(row);
  std::vector<int> out;
  for (std::size_t a = 0; a < row.size(); ++a) {
    if (row[a] >= hi - tol) out.push_back(static_cast<int>(a));
  }
  return out;
}

QLearner::QLearner(const env::GridWorld& world, QParams params, std::uint64_t seed)
    : world_(&world),
      q_(world.state_count(), env::kActionCount, params),
      explore_(make_stream(seed, "training")),
      slip_(make_stream(seed, "slip")) {}

int QLearner::choose(StateId s, double epsilon) {
  if (uniform01(explore_) < epsilon) return uniform_index(explore_, env::kActionCount);
  return greedy_action(q_, s);
}

TrainStats QLearner::train(const reward::RewardTable& rewards, const stl::SpecSet& specs, double lambda,
                           long timesteps, double pga_bonus_weight) {
  if (pga_bonus_weight < 0.0) throw RlError("PGA bonus weight must be non-negative");
  if (pga_bonus_weight > 0.0) graph::validate_lambda(lambda);
  const env::GridWorld& world = *world_;
  const QParams& p = q_.params();
  TrainStats stats;
  std::vector<StateId> visited;
  std::vector<int> actions;

  while (stats.timesteps < timesteps) {
    StateId s = world.id(world.start());
    visited.assign(1, s);
    actions.clear();
    for (int t = 0; t < world.max_steps(); ++t) {
      const int a = choose(s, p.epsilon.at(stats.timesteps));
      const env::Transition tr = env::step(world, s, static_cast<Action>(a), t, slip_);
      ++steps_;
      ++stats.timesteps;
      visited.push_back(tr.next_state);
      actions.push_back(a);

      double target = rewards.query(tr.next_state);
      const bool bootstrap = !tr.done || tr.reason == env::DoneReason::Timeout;
      if (bootstrap) target += p.gamma * kernels::reduce_max(q_.row(tr.next_state));
      if (tr.done && pga_bonus_weight > 0.0) {
        const stl::Trajectory episode = env::trajectory_from_states(world, visited, actions);
        target += pga_bonus_weight * graph::pga_of(stl::evaluate_specs(specs, episode), lambda).pga;
      }
      double& cell = q_.at(s, a);
      cell += p.learning_rate * (target - cell);

      s = tr.next_state;
      if (tr.done) {
        if (tr.reason == env::DoneReason::Goal) ++stats.successes;
        break;
      }
    }
    ++stats.episodes;
  }
  last_train_steps_ = stats.timesteps;
  return stats;
}

stl::Trajectory QLearner::rollout(double epsilon) {
  return env::rollout(
      *world_, [&](StateId s) { return static_cast<Action>(choose(s, epsilon)); }, slip_);
}

QTable train(const env::GridWorld& world, const reward::RewardTable& rewards, const stl::SpecSet& specs, double lambda,
             const TrainConfig& config, const QParams& params) {
  if (config.total_timesteps <= 0) throw RlError("total_timesteps must be positive");
  QLearner learner(world, params, config.seed);
  learner.train(rewards, specs, lambda, config.total_timesteps, config.pga_bonus_weight);
  return learner.table();
}

double success_rate(const env::GridWorld& world, const QTable& q, int episodes, Rng& slip) {
  if (episodes <= 0) throw RlError("episode count must be positive");
  int ok = 0;
  const env::Policy policy = greedy_policy(q);
  for (int i = 0; i < episodes; ++i) {
    const stl::Trajectory tau = env::rollout(world, policy, slip);
    if (env::terminal_reason(world, tau) == env::DoneReason::Goal) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(episodes);
}

}  // namespace alstl::rl
