#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "alstl/gridworld.hpp"
#include "alstl/reward_model.hpp"
#include "alstl/rng.hpp"
#include "alstl/stl.hpp"

namespace alstl::rl {

class RlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using env::Action;
using env::StateId;

/// Linear decay from `initial` to `floor` over `decay_steps`, then flat.
struct EpsilonSchedule {
  double initial = 1.0;
  double floor = 0.05;
  long decay_steps = 10000;

  double at(long step) const;
  bool operator==(const EpsilonSchedule&) const = default;
};

struct QParams {
  double gamma = 0.9;
  double learning_rate = 0.05;
  EpsilonSchedule epsilon{};
  bool operator==(const QParams&) const = default;
};

void validate(const QParams& p);

/// Dense state x action table.
class QTable {
 public:
  QTable(int states, int actions, QParams params = {});

  int states() const noexcept { return states_; }
  int actions() const noexcept { return actions_; }
  const QParams& params() const noexcept { return params_; }
  double gamma() const noexcept { return params_.gamma; }

  double& at(int s, int a) { return values_[index(s, a)]; }
  double at(int s, int a) const { return values_[index(s, a)]; }
  std::span<const double> row(int s) const { return {values_.data() + static_cast<std::size_t>(s) * actions_, static_cast<std::size_t>(actions_)}; }
  std::span<double> row(int s) { return {values_.data() + static_cast<std::size_t>(s) * actions_, static_cast<std::size_t>(actions_)}; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const QTable&) const = default;

 private:
  std::size_t index(int s, int a) const;

  int states_;
  int actions_;
  QParams params_;
  std::vector<double> values_;
};

/// First maximal action in up < down < left < right order.
int greedy_action(const QTable& q, StateId s);
env::Policy greedy_policy(const QTable& q);
/// Actions within `tol` of the row maximum.
std::vector<int> argmax_set(std::span<const double> row, double tol = 1e-9);

struct TrainConfig {
  long total_timesteps = 20000;
  int episodes_per_eval = 100;
  /// Multiplier on the episode PGA added to the final transition; 0 disables it.
  double pga_bonus_weight = 10.0;
  std::uint64_t seed = 0;
};

struct TrainStats {
  long timesteps = 0;
  long episodes = 0;
  long successes = 0;
};

/// Tabular Q-learner that keeps its table and RNG streams between calls, so
/// consecutive training phases warm-start from the previous table.
class QLearner {
 public:
  QLearner(const env::GridWorld& world, QParams params, std::uint64_t seed);

  /// Runs epsilon-greedy Q-learning for `timesteps` environment steps. Step
  /// reward is rewards.query(next_state). When the episode ends, its PGA over
  /// `specs` times `pga_bonus_weight` is added to the final TD target. Goal and
  /// hole transitions do not bootstrap; timeouts do. The epsilon schedule
  /// restarts on every call.
  TrainStats train(const reward::RewardTable& rewards, const stl::SpecSet& specs, double lambda, long timesteps,
                   double pga_bonus_weight);

  const QTable& table() const noexcept { return q_; }
  QTable& table() noexcept { return q_; }
  long steps_done() const noexcept { return steps_; }
  double current_epsilon() const { return q_.params().epsilon.at(last_train_steps_); }
  const env::GridWorld& world() const noexcept { return *world_; }

  /// One rollout that takes a random action with probability `epsilon`
  /// (drawn from this learner's exploration stream).
  stl::Trajectory rollout(double epsilon);

 private:
  int choose(StateId s, double epsilon);

  const env::GridWorld* world_;
  QTable q_;
  Rng explore_;
  Rng slip_;
  long steps_ = 0;
  long last_train_steps_ = 0;
};

QTable train(const env::GridWorld& world, const reward::RewardTable& rewards, const stl::SpecSet& specs, double lambda,
             const TrainConfig& config, const QParams& params = {});

/// Finite MDP with dense transition tensor P[s][a][s'] and reward R[s][a].
struct TabularMdp {
  int states = 0;
  int actions = 0;
  std::vector<double> transition;  // (s * actions + a) * states + s'
  std::vector<double> reward;      // s * actions + a

  std::span<const double> next_distribution(int s, int a) const {
    return {transition.data() + (static_cast<std::size_t>(s) * actions + a) * states, static_cast<std::size_t>(states)};
  }
  double r(int s, int a) const { return reward[static_cast<std::size_t>(s) * actions + a]; }
};

void validate(const TabularMdp& mdp);

/// Gridworld as an infinite-horizon MDP: R(s,a) = E[reward(s')], goal and
/// holes absorbing with zero reward.
TabularMdp mdp_from_world(const env::GridWorld& world, const reward::RewardTable& rewards);

TabularMdp affine_transform(const TabularMdp& mdp, double scale, double shift);

/// Bellman optimality iteration until the sup-norm distance to the fixed
/// point is guaranteed below `tol`.
QTable value_iteration(const TabularMdp& mdp, double gamma, double tol = 1e-10, long max_iters = 1000000);
QTable value_iteration(const env::GridWorld& world, const reward::RewardTable& rewards, double gamma,
                       double tol = 1e-10);

/// Fraction of `episodes` greedy rollouts that end on the goal.
double success_rate(const env::GridWorld& world, const QTable& q, int episodes, Rng& slip);

}  // namespace alstl::rl
