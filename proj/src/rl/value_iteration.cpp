#include <algorithm>
#include <cmath>

#include "alstl/kernels.hpp"
#include "alstl/rl.hpp"

namespace alstl::rl {

void validate(const TabularMdp& mdp) {
  if (mdp.states <= 0 || mdp.actions <= 0) throw RlError("MDP needs states and actions");
  const std::size_t sa = static_cast<std::size_t>(mdp.states) * mdp.actions;
  if (mdp.reward.size() != sa || mdp.transition.size() != sa * mdp.states) throw RlError("MDP tensor sizes are inconsistent");
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) {
      double total = 0.0;
      for (double p : mdp.next_distribution(s, a)) {
        if (p < 0.0) throw RlError("negative transition probability");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9) throw RlError("transition row does not sum to 1");
    }
  }
}

TabularMdp mdp_from_world(const env::GridWorld& world, const reward::RewardTable& rewards) {
  TabularMdp mdp;
  mdp.states = world.state_count();
  mdp.actions = env::kActionCount;
  const std::size_t n = static_cast<std::size_t>(mdp.states);
  mdp.transition.assign(n * mdp.actions * n, 0.0);
  mdp.reward.assign(n * mdp.actions, 0.0);
  const double slip = world.slip_prob();
  for (int s = 0; s < mdp.states; ++s) {
    for (int a = 0; a < mdp.actions; ++a) {
      double* row = mdp.transition.data() + (static_cast<std::size_t>(s) * mdp.actions + a) * n;
      if (world.is_terminal(s)) {
        row[s] = 1.0;
        continue;
      }
      // Lateral slips mirror env::step: left rotation then right rotation.
      static constexpr Action kLeftOf[] = {Action::Left, Action::Right, Action::Down, Action::Up};
      static constexpr Action kRightOf[] = {Action::Right, Action::Left, Action::Up, Action::Down};
      const env::Cell c = world.cell(s);
      row[world.id(world.move(c, static_cast<Action>(a)))] += 1.0 - slip;
      if (slip > 0.0) {
        row[world.id(world.move(c, kLeftOf[a]))] += slip / 2;
        row[world.id(world.move(c, kRightOf[a]))] += slip / 2;
      }
      double r = 0.0;
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        if (row[s2] != 0.0) r += row[s2] * rewards.query(static_cast<StateId>(s2));
      }
      mdp.reward[static_cast<std::size_t>(s) * mdp.actions + a] = r;
    }
  }
  return mdp;
}

TabularMdp affine_transform(const TabularMdp& mdp, double scale, double shift) {
  if (!(scale > 0.0)) throw RlError("affine scale must be positive");
  TabularMdp out = mdp;
  for (double& r : out.reward) r = scale * r + shift;
  return out;
}

QTable value_iteration(const TabularMdp& mdp, double gamma, double tol, long max_iters) {
  validate(mdp);
  QParams params;
  params.gamma = gamma;
  QTable q(mdp.states, mdp.actions, params);
  std::vector<double> v(static_cast<std::size_t>(mdp.states), 0.0);
  for (long it = 0; it < max_iters; ++it) {
    double change = 0.0;
    for (int s = 0; s < mdp.states; ++s) {
      for (int a = 0; a < mdp.actions; ++a) {
        const double updated = mdp.r(s, a) + gamma * kernels::dot(mdp.next_distribution(s, a), v);
        change = std::max(change, std::abs(updated - q.at(s, a)));
        q.at(s, a) = updated;
      }
    }
    for (int s = 0; s < mdp.states; ++s) v[s] = kernels::reduce_max(q.row(s));
    // Contraction: distance to the fixed point is at most change * gamma / (1 - gamma).
    if (change * gamma < tol * (1.0 - gamma)) break;
  }
  return q;
}

QTable value_iteration(const env::GridWorld& world, const reward::RewardTable& rewards, double gamma, double tol) {
  return value_iteration(mdp_from_world(world, rewards), gamma, tol);
}

}  // namespace alstl::rl
