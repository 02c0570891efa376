#include "alstl/reward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace alstl::reward {

std::vector<int> competition_ranks(std::span<const double> fitness) {
  std::vector<int> ranks(fitness.size());
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    int below = 0;
    for (double f : fitness) {
      if (f < fitness[i]) ++below;
    }
    ranks[i] = below + 1;
  }
  return ranks;
}

std::vector<RankedDemo> rank_demos(std::span<const stl::Trajectory> demos, const stl::SpecSet& specs,
                                   const graph::WeightMap& weights) {
  std::vector<RankedDemo> out;
  out.reserve(demos.size());
  std::vector<double> fitness;
  for (const auto& d : demos) {
    RankedDemo r;
    r.trajectory = &d;
    r.robustness = stl::evaluate_specs(specs, d);
    r.fitness = graph::cumulative_fitness(r.robustness, weights);
    r.satisfies_all = std::all_of(r.robustness.values.begin(), r.robustness.values.end(), [](double v) { return v > 0.0; });
    fitness.push_back(r.fitness);
    out.push_back(std::move(r));
  }
  const auto ranks = competition_ranks(fitness);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = ranks[i];
  return out;
}

RewardTable::RewardTable(double default_reward) : default_(default_reward) {
  if (!std::isfinite(default_reward)) throw RewardError("default reward must be finite");
}

double RewardTable::query(StateId s) const {
  auto it = entries_.find(s);
  return it == entries_.end() ? default_ : it->second;
}

void RewardTable::set(StateId s, double r) {
  if (!std::isfinite(r)) throw RewardError("reward for state " + std::to_string(s) + " is not finite");
  entries_[s] = r;
}

RewardTable affine_transform(const RewardTable& table, double scale, double shift) {
  if (!(scale > 0.0)) throw RewardError("affine scale must be positive");
  RewardTable out(scale * table.default_reward() + shift);
  for (const auto& [s, r] : table.entries()) out.set(s, scale * r + shift);
  return out;
}

std::vector<StateId> visited_states(const stl::Trajectory& tau, std::string_view state_channel) {
  const auto idx = stl::find_channel(tau.schema(), state_channel);
  if (!idx) throw RewardError("trajectory has no '" + std::string(state_channel) + "' channel");
  std::vector<StateId> out(tau.sample_count());
  for (std::size_t t = 0; t < tau.sample_count(); ++t) out[t] = static_cast<StateId>(std::lround(tau.at(t, *idx)));
  return out;
}

RewardTable infer_rewards(std::span<const RankedDemo> ranked, const stl::SpecSet& specs,
                          std::span<const StateId> state_space, double default_reward) {
  RewardTable table(default_reward);
  if (ranked.empty()) return table;
  const std::unordered_set<StateId> universe(state_space.begin(), state_space.end());
  const double m = static_cast<double>(ranked.size());

  // Ascending fitness, so later writes come from fitter demos.
  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranked[a].fitness < ranked[b].fitness; });

  for (std::size_t i : order) {
    const RankedDemo& d = ranked[i];
    if (d.trajectory == nullptr) throw RewardError("ranked demo without trajectory");
    const auto states = visited_states(*d.trajectory);
    const double scale = static_cast<double>(d.rank) / m;
    const double len = static_cast<double>(states.size());

    bool safety_violated = false;
    if (!d.satisfies_all) {
      for (std::size_t k = 0; k < specs.size() && k < d.robustness.size(); ++k) {
        if (d.robustness.values[k] <= 0.0 && specs.specs[k].is_safety()) safety_violated = true;
      }
    }
    const double magnitude = std::max(std::abs(d.fitness), kViolationFloor);

    for (std::size_t t = 0; t < states.size(); ++t) {
      if (!universe.empty() && !universe.contains(states[t])) {
        throw RewardError("state " + std::to_string(states[t]) + " outside the state space");
      }
      const double progress = static_cast<double>(t + 1) / len;
      double r;
      if (d.satisfies_all) {
        r = scale * d.fitness * progress;
      } else if (safety_violated) {
        r = -scale * magnitude * progress;
      } else {
        r = -magnitude / len;
      }
      table.set(states[t], r);
    }
  }
  return table;
}

}  // namespace alstl::reward
