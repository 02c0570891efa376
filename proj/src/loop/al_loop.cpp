#include "alstl/al_loop.hpp"

namespace alstl::loop {

void validate(const LoopConfig& c) {
  graph::validate_lambda(c.lambda);
  if (c.buffer_size == 0) throw LoopError("buffer size must be positive");
  if (c.rollouts <= 0) throw LoopError("rollout count must be positive");
  if (c.max_cycles < 0) throw LoopError("max_cycles must be non-negative");
  if (c.timesteps_per_cycle <= 0) throw LoopError("timesteps per cycle must be positive");
  if (c.pga_bonus_weight < 0.0) throw LoopError("PGA bonus weight must be non-negative");
  if (c.eval_episodes <= 0) throw LoopError("evaluation episode count must be positive");
  if (!(c.candidate_epsilon >= 0.0 && c.candidate_epsilon <= 1.0)) throw LoopError("candidate epsilon must lie in [0, 1]");
  rl::validate(c.q_params);
}

InferredReward infer_from_frontier(const Buffer& frontier, const stl::SpecSet& specs, const env::GridWorld& world) {
  if (frontier.empty()) throw LoopError("cannot infer a reward from an empty frontier");
  std::vector<RobustnessVector> rhos;
  rhos.reserve(frontier.size());
  for (const auto& r : frontier.records()) rhos.push_back(r.robustness);
  InferredReward out{graph::build_global_dag(rhos), {}, reward::RewardTable{}};
  out.weights = graph::node_weights(out.global_dag, specs.size());

  const auto demos = frontier.trajectories();
  const auto ranked = reward::rank_demos(demos, specs, out.weights);
  const auto states = world.all_states();
  out.table = reward::infer_rewards(ranked, specs, states);
  return out;
}

LoopResult run(std::span<const stl::Trajectory> demos, const stl::SpecSet& specs, const env::GridWorld& world,
               const LoopConfig& config, const CycleCallback& on_cycle) {
  validate(config);
  if (demos.empty()) throw LoopError("demonstration set is empty");
  if (!env::shortest_safe_plan(world)) throw env::UnsolvableWorldError("no safe path from start to goal");

  std::uint64_t serial = 0;
  std::vector<Record> initial;
  for (const auto& d : demos) initial.push_back(make_record(d, specs, config.lambda, serial++));
  Buffer frontier = Buffer::top_p(std::move(initial), config.buffer_size);

  rl::QLearner learner(world, config.q_params, config.seed);
  Rng eval_slip = make_stream(config.seed, "eval");
  InferredReward current = infer_from_frontier(frontier, specs, world);
  std::vector<CycleReport> reports;

  for (int cycle = 1; cycle <= config.max_cycles; ++cycle) {
    if (cycle > 1) current = infer_from_frontier(frontier, specs, world);
    learner.train(current.table, specs, config.lambda, config.timesteps_per_cycle, config.pga_bonus_weight);

    Buffer candidate(config.buffer_size);
    for (int i = 0; i < config.rollouts; ++i) {
      candidate.push(make_record(learner.rollout(config.candidate_epsilon), specs, config.lambda, serial++));
    }

    const double f_hat = metric(frontier, config.op);
    const double c_hat = metric(candidate, config.op);
    bool updated = true;
    switch (config.strategy) {
      case UpdateStrategy::StrategicMerge: {
        MergeResult m = strategic_merge(frontier, candidate, config.op);
        frontier = std::move(m.frontier);
        updated = m.updated;
        break;
      }
      case UpdateStrategy::NaiveMerge: frontier = naive_merge(frontier, candidate); break;
      case UpdateStrategy::ReplaceAll: frontier = replace_all(frontier, candidate); break;
    }

    std::vector<RobustnessVector> rhos;
    for (const auto& r : frontier.records()) rhos.push_back(r.robustness);
    const graph::PerfDag dag = graph::build_global_dag(rhos);

    CycleReport rep;
    rep.cycle = cycle;
    rep.frontier_metric = metric(frontier, config.op);
    rep.candidate_metric = c_hat;
    for (const auto& n : dag.nodes()) {
      rep.spec_ids.push_back(n.spec);
      rep.spec_weights.push_back(n.weight);
    }
    rep.success_rate = rl::success_rate(world, learner.table(), config.eval_episodes, eval_slip);
    rep.mean_pga = metric(candidate, MergeOp::Mean);
    rep.updated = updated;
    rep.timesteps = learner.steps_done();
    rep.converged =
        check_convergence(f_hat, c_hat, config.convergence_threshold, learner.steps_done() >= config.min_exploration_steps);
    reports.push_back(rep);
    if (on_cycle) on_cycle(rep);
    if (rep.converged) break;
  }

  std::vector<RobustnessVector> rhos;
  for (const auto& r : frontier.records()) rhos.push_back(r.robustness);
  return LoopResult{std::move(current.table), learner.table(), std::move(reports), std::move(frontier),
                    graph::build_global_dag(rhos)};
}

}  // namespace alstl::loop
