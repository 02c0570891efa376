#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "alstl/gridworld.hpp"
#include "alstl/perf_graph.hpp"
#include "alstl/reward_model.hpp"
#include "alstl/rl.hpp"
#include "alstl/stl.hpp"

namespace alstl::loop {

class LoopError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Record {
  stl::Trajectory trajectory;
  RobustnessVector robustness;
  double pga = 0.0;
  /// Insertion counter; larger is newer. Breaks PGA ties when truncating.
  std::uint64_t serial = 0;
};

Record make_record(stl::Trajectory tau, const stl::SpecSet& specs, double lambda, std::uint64_t serial);

/// Bounded trajectory buffer. Used both as the frontier and as the candidate set.
class Buffer {
 public:
  explicit Buffer(std::size_t capacity);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::vector<Record>& records() const noexcept { return records_; }
  std::vector<double> pgas() const;
  std::vector<stl::Trajectory> trajectories() const;

  /// Adds a record, evicting the lowest-PGA (oldest on ties) when full.
  void push(Record r);

  /// Keeps the `capacity` best records: descending PGA, newer first on ties.
  static Buffer top_p(std::vector<Record> records, std::size_t capacity);

 private:
  std::size_t capacity_;
  std::vector<Record> records_;
};

enum class MergeOp { Min, Max, Mean };
enum class UpdateStrategy { StrategicMerge, NaiveMerge, ReplaceAll };

MergeOp parse_merge_op(std::string_view s);
UpdateStrategy parse_update_strategy(std::string_view s);
std::string_view to_string(MergeOp op);
std::string_view to_string(UpdateStrategy s);

double metric(std::span<const double> pgas, MergeOp op);
double metric(const Buffer& buffer, MergeOp op);

struct MergeResult {
  Buffer frontier;
  bool updated = false;
};

/// If the candidate metric beats the frontier metric, keep the records of
/// frontier + candidate whose PGA exceeds the old frontier metric (top-p);
/// otherwise leave the frontier as is.
MergeResult strategic_merge(const Buffer& frontier, const Buffer& candidate, MergeOp op);
Buffer naive_merge(const Buffer& frontier, const Buffer& candidate);
Buffer replace_all(const Buffer& frontier, const Buffer& candidate);

bool check_convergence(double frontier_metric, double candidate_metric, double threshold, bool exploration_budget_met);

struct LoopConfig {
  double lambda = 0.5;
  MergeOp op = MergeOp::Mean;
  UpdateStrategy strategy = UpdateStrategy::ReplaceAll;
  std::size_t buffer_size = 5;
  int rollouts = 5;
  int max_cycles = 5;
  double convergence_threshold = 1e-6;
  /// Training steps that must have elapsed before convergence may be declared.
  long min_exploration_steps = 0;
  /// Exploration rate used while collecting candidate rollouts.
  double candidate_epsilon = 0.0;
  /// Training steps per cycle.
  long timesteps_per_cycle = 20000;
  double pga_bonus_weight = 10.0;
  int eval_episodes = 100;
  rl::QParams q_params{};
  std::uint64_t seed = 0;
};

void validate(const LoopConfig& c);

struct CycleReport {
  int cycle = 0;
  double frontier_metric = 0.0;
  double candidate_metric = 0.0;
  std::vector<std::string> spec_ids;
  std::vector<double> spec_weights;
  double success_rate = 0.0;
  double mean_pga = 0.0;
  bool updated = false;
  bool converged = false;
  long timesteps = 0;
};

struct LoopResult {
  reward::RewardTable rewards;
  rl::QTable q;
  std::vector<CycleReport> reports;
  Buffer frontier;
  graph::PerfDag global_dag;
};

/// Reward from the frontier's global DAG: weights, ranking and propagation.
struct InferredReward {
  graph::PerfDag global_dag;
  graph::WeightMap weights;
  reward::RewardTable table;
};
InferredReward infer_from_frontier(const Buffer& frontier, const stl::SpecSet& specs, const env::GridWorld& world);

using CycleCallback = std::function<void(const CycleReport&)>;

/// The closed apprenticeship loop: infer reward from the frontier, train,
/// collect candidates, update the frontier, repeat.
LoopResult run(std::span<const stl::Trajectory> demos, const stl::SpecSet& specs, const env::GridWorld& world,
               const LoopConfig& config, const CycleCallback& on_cycle = {});

}  // namespace alstl::loop
