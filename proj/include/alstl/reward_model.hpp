#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "alstl/perf_graph.hpp"
#include "alstl/stl.hpp"

namespace alstl::reward {

class RewardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateId = int;

/// Smallest magnitude given to a violating demonstration whose fitness is 0,
/// so that its visited states still come out strictly negative.
constexpr double kViolationFloor = 1e-3;

struct RankedDemo {
  const stl::Trajectory* trajectory = nullptr;
  RobustnessVector robustness;
  double fitness = 0.0;
  int rank = 1;  // 1 = lowest fitness, competition ranking on ties
  bool satisfies_all = false;
};

/// Ranks for a list of fitness values: ties share the lower rank and the next
/// distinct value skips ahead (1, 1, 3, ...).
std::vector<int> competition_ranks(std::span<const double> fitness);

std::vector<RankedDemo> rank_demos(std::span<const stl::Trajectory> demos, const stl::SpecSet& specs,
                                   const graph::WeightMap& weights);

/// Tabular state reward; unvisited states fall back to the default.
class RewardTable {
 public:
  explicit RewardTable(double default_reward = 0.0);

  double query(StateId s) const;
  void set(StateId s, double r);
  double default_reward() const noexcept { return default_; }
  const std::map<StateId, double>& entries() const noexcept { return entries_; }

  bool operator==(const RewardTable&) const = default;

 private:
  std::map<StateId, double> entries_;
  double default_;
};

/// x -> scale * x + shift on every entry and on the default. scale must be > 0.
RewardTable affine_transform(const RewardTable& table, double scale, double shift);

/// Reads the visited state ids from the trajectory's `state_channel`.
std::vector<StateId> visited_states(const stl::Trajectory& tau, std::string_view state_channel = "state");

/// Propagates rank-scaled partial fitness onto visited states.
///
/// A satisfying demo of rank k out of m with L+1 samples gives sample t the
/// value (k/m) * r * (t+1)/(L+1). A violating demo gives
/// -(k/m) * |r| * (t+1)/(L+1) when one of the violated specs is a safety
/// (top-level Always) spec, otherwise -|r|/(L+1) on every visited state.
/// Where demos overlap, the higher-fitness demo wins. `state_space` lists the
/// states the table may hold; visits outside it are rejected.
RewardTable infer_rewards(std::span<const RankedDemo> ranked, const stl::SpecSet& specs,
                          std::span<const StateId> state_space, double default_reward = 0.0);

}  // namespace alstl::reward
