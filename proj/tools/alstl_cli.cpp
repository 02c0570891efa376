// alstl: demo generation, trajectory evaluation, the apprenticeship loop and
// policy rollouts from the command line.
//
// Exit codes: 0 success, 1 internal error, 2 usage or input error.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "alstl/al_loop.hpp"
#include "alstl/io.hpp"
#include "alstl/kernels.hpp"

namespace fs = std::filesystem;
using alstl::io::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

// ---------------------------------------------------------------- demo-gen

struct DemoGenArgs {
  std::string world = "4x4";
  int count = 5;
  std::uint64_t seed = 0;
  int max_detours = 0;
  bool include_violating = false;
  std::string output;
};

std::vector<alstl::stl::Trajectory> generate(const alstl::env::GridWorld& world, const DemoGenArgs& a) {
  if (a.count <= 0) throw UsageError("demo count must be positive");
  alstl::Rng rng = alstl::make_stream(a.seed, "demo-gen");
  return alstl::env::generate_demos(world, a.count, {a.max_detours, a.include_violating}, rng);
}

int cmd_demo_gen(const DemoGenArgs& a) {
  const auto world = alstl::io::load_world(a.world);
  const auto demos = generate(world, a);
  if (a.output.empty()) {
    alstl::io::write_trajectories(std::cout, demos);
  } else {
    std::ofstream out(a.output);
    if (!out) throw UsageError("cannot write " + a.output);
    alstl::io::write_trajectories(out, demos);
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string specs;
  std::string trajectories;
  double lambda = 0.5;
  std::string csv;
  std::string dag_dir;
};

int cmd_evaluate(const EvaluateArgs& a) {
  std::ifstream tin(a.trajectories);
  if (!tin) throw UsageError("cannot open " + a.trajectories);
  const auto trajs = alstl::io::read_trajectories(tin);
  const alstl::stl::Schema schema = trajs.empty() ? alstl::stl::Schema{} : trajs.front().schema();
  const auto specs = alstl::io::spec_set_from_json(alstl::io::read_json_file(a.specs), schema);
  alstl::graph::validate_lambda(a.lambda);

  std::ostringstream csv;
  csv << "node_sum,edge_sum,pga";
  for (const auto& s : specs.specs) csv << ",rho_" << s.name;
  csv << '\n';
  if (!a.dag_dir.empty()) fs::create_directories(a.dag_dir);

  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto rho = alstl::stl::evaluate_specs(specs, trajs[i]);
    const auto dag = alstl::graph::build_local_dag(rho);
    const auto rec = alstl::graph::pga(dag, a.lambda);
    csv << num(rec.node_sum) << ',' << num(rec.edge_sum) << ',' << num(rec.pga);
    for (double v : rho.values) csv << ',' << num(v);
    csv << '\n';

    std::cout << "trajectory " << i << ": rho=[";
    for (std::size_t k = 0; k < rho.size(); ++k) std::cout << (k ? ", " : "") << num(rho.values[k]);
    std::cout << "] node_sum=" << num(rec.node_sum) << " edge_sum=" << num(rec.edge_sum) << " pga=" << num(rec.pga)
              << '\n';
    std::cout << alstl::graph::to_dot(dag, "traj" + std::to_string(i));
    if (!a.dag_dir.empty()) {
      const fs::path base = fs::path(a.dag_dir) / ("traj_" + std::to_string(i));
      alstl::io::write_json_file(base.string() + ".json", alstl::io::to_json(dag));
      std::ofstream(base.string() + ".dot") << alstl::graph::to_dot(dag, "traj" + std::to_string(i));
    }
  }
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw UsageError("cannot write " + a.csv);
    out << csv.str();
  }
  return 0;
}

// ---------------------------------------------------------------- learn

struct ExperimentConfig {
  std::string world = "4x4";
  std::string specs;  // empty: built-in reach-avoid set
  std::string demos;  // empty: generate
  int demo_count = 5;
  bool include_violating = false;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double delta = 1.0;
  alstl::loop::LoopConfig loop{};
  long timesteps = 0;  // 0: pick per world size
  std::string output = "runs";
};

json config_to_json(const ExperimentConfig& c) {
  const auto& l = c.loop;
  return {{"world", c.world},
          {"specs", c.specs},
          {"demos", c.demos},
          {"demo_count", c.demo_count},
          {"include_violating", c.include_violating},
          {"seeds", c.seeds},
          {"delta", c.delta},
          {"lambda", l.lambda},
          {"merge_op", alstl::loop::to_string(l.op)},
          {"update_strategy", alstl::loop::to_string(l.strategy)},
          {"buffer_size", l.buffer_size},
          {"rollouts", l.rollouts},
          {"max_cycles", l.max_cycles},
          {"convergence_threshold", l.convergence_threshold},
          {"min_exploration_steps", l.min_exploration_steps},
          {"candidate_epsilon", l.candidate_epsilon},
          {"timesteps", l.timesteps_per_cycle},
          {"pga_bonus_weight", l.pga_bonus_weight},
          {"eval_episodes", l.eval_episodes},
          {"gamma", l.q_params.gamma},
          {"learning_rate", l.q_params.learning_rate},
          {"epsilon_initial", l.q_params.epsilon.initial},
          {"epsilon_floor", l.q_params.epsilon.floor},
          {"epsilon_decay_steps", l.q_params.epsilon.decay_steps},
          {"output", c.output}};
}

void apply_config_json(ExperimentConfig& c, const json& j) {
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  auto& l = c.loop;
  get("world", c.world);
  get("specs", c.specs);
  get("demos", c.demos);
  get("demo_count", c.demo_count);
  get("include_violating", c.include_violating);
  get("seeds", c.seeds);
  get("delta", c.delta);
  get("lambda", l.lambda);
  if (j.contains("merge_op")) l.op = alstl::loop::parse_merge_op(j.at("merge_op").get<std::string>());
  if (j.contains("update_strategy")) l.strategy = alstl::loop::parse_update_strategy(j.at("update_strategy").get<std::string>());
  get("buffer_size", l.buffer_size);
  get("rollouts", l.rollouts);
  get("max_cycles", l.max_cycles);
  get("convergence_threshold", l.convergence_threshold);
  get("min_exploration_steps", l.min_exploration_steps);
  get("candidate_epsilon", l.candidate_epsilon);
  get("timesteps", c.timesteps);
  get("pga_bonus_weight", l.pga_bonus_weight);
  get("eval_episodes", l.eval_episodes);
  get("gamma", l.q_params.gamma);
  get("learning_rate", l.q_params.learning_rate);
  get("epsilon_initial", l.q_params.epsilon.initial);
  get("epsilon_floor", l.q_params.epsilon.floor);
  get("epsilon_decay_steps", l.q_params.epsilon.decay_steps);
  get("output", c.output);
}

// Per-cycle training budget and epsilon decay sized to the grid.
void fill_world_defaults(ExperimentConfig& c, const alstl::env::GridWorld& world, bool decay_set) {
  const long cells = world.state_count();
  if (c.timesteps <= 0) c.timesteps = cells <= 16 ? 20000 : 150000;
  c.loop.timesteps_per_cycle = c.timesteps;
  if (!decay_set) c.loop.q_params.epsilon.decay_steps = c.timesteps / 2;
}

std::string metrics_header(const std::vector<std::string>& ids) {
  std::string h = "cycle,frontier_metric,candidate_metric,success_rate,mean_pga";
  for (const auto& id : ids) h += ",w_" + id;
  return h;
}

int cmd_learn(ExperimentConfig c, bool decay_set) {
  if (c.seeds.empty()) throw UsageError("at least one seed is required");
  if (c.demo_count <= 0) throw UsageError("demo count must be positive");
  const auto world = alstl::io::load_world(c.world);
  fill_world_defaults(c, world, decay_set);
  const alstl::stl::SpecSet specs = c.specs.empty()
                                        ? alstl::env::builtin_specs(world, c.delta)
                                        : alstl::io::spec_set_from_json(alstl::io::read_json_file(c.specs),
                                                                        alstl::env::trajectory_schema());
  alstl::loop::validate(c.loop);

  const json cfg = config_to_json(c);
  const std::string cfg_hash = hex(fnv1a(cfg.dump()));
  const fs::path root(c.output);
  fs::create_directories(root);
  std::ofstream summary(root / "summary.csv");
  summary << "seed,cycles,final_success_rate,final_frontier_metric";
  for (const auto& s : specs.specs) summary << ",w_" << s.name;
  summary << '\n';

  for (std::uint64_t seed : c.seeds) {
    const fs::path dir = root / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);

    std::vector<alstl::stl::Trajectory> demos;
    if (c.demos.empty()) {
      DemoGenArgs g;
      g.count = c.demo_count;
      g.seed = seed;
      g.include_violating = c.include_violating;
      demos = generate(world, g);
    } else {
      std::ifstream din(c.demos);
      if (!din) throw UsageError("cannot open " + c.demos);
      demos = alstl::io::read_trajectories(din);
    }

    alstl::loop::LoopConfig lc = c.loop;
    lc.seed = seed;
    std::ofstream metrics(dir / "metrics.csv");
    std::ofstream cycles(dir / "cycles.jsonl");
    metrics << metrics_header(specs.names()) << '\n';
    const auto result = alstl::loop::run(demos, specs, world, lc, [&](const alstl::loop::CycleReport& r) {
      metrics << r.cycle << ',' << num(r.frontier_metric) << ',' << num(r.candidate_metric) << ','
              << num(r.success_rate) << ',' << num(r.mean_pga);
      for (double w : r.spec_weights) metrics << ',' << num(w);
      metrics << '\n' << std::flush;
      cycles << alstl::io::to_json(r).dump() << '\n' << std::flush;
      std::cout << "seed " << seed << " cycle " << r.cycle << ": F=" << num(r.frontier_metric)
                << " C=" << num(r.candidate_metric) << " success=" << num(r.success_rate) << " weights=[";
      for (std::size_t i = 0; i < r.spec_weights.size(); ++i) std::cout << (i ? ", " : "") << num(r.spec_weights[i]);
      std::cout << "]" << (r.converged ? " converged" : "") << '\n';
    });

    alstl::io::write_json_file(dir / "reward.json", alstl::io::to_json(result.rewards));
    alstl::io::write_json_file(dir / "qtable.json", alstl::io::to_json(result.q));
    alstl::io::write_json_file(dir / "world.json", alstl::io::to_json(world));
    alstl::io::write_json_file(dir / "specs.json", alstl::io::to_json(specs));
    alstl::io::write_json_file(dir / "global_dag.json", alstl::io::to_json(result.global_dag));
    {
      std::ofstream f(dir / "frontier.jsonl");
      alstl::io::write_trajectories(f, result.frontier.trajectories());
      std::ofstream d(dir / "demos.jsonl");
      alstl::io::write_trajectories(d, demos);
    }
    json manifest = {{"config", cfg},
                     {"config_hash", cfg_hash},
                     {"seed", seed},
                     {"cycles_run", result.reports.size()},
                     {"simd", std::string(alstl::kernels::isa_name(alstl::kernels::active().isa))},
                     {"artifacts",
                      {"metrics.csv", "cycles.jsonl", "reward.json", "qtable.json", "world.json", "specs.json",
                       "global_dag.json", "frontier.jsonl", "demos.jsonl"}}};
    alstl::io::write_json_file(dir / "manifest.json", manifest);

    summary << seed << ',' << result.reports.size() << ',';
    if (result.reports.empty()) {
      summary << ",";
      for (std::size_t i = 0; i < specs.size(); ++i) summary << ',';
    } else {
      const auto& last = result.reports.back();
      summary << num(last.success_rate) << ',' << num(last.frontier_metric);
      for (double w : last.spec_weights) summary << ',' << num(w);
    }
    summary << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- rollout

struct RolloutArgs {
  std::string run;
  int episodes = 100;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_rollout(const RolloutArgs& a) {
  if (a.episodes <= 0) throw UsageError("episode count must be positive");
  const fs::path dir(a.run);
  for (const char* f : {"world.json", "qtable.json"}) {
    if (!fs::exists(dir / f)) throw UsageError("run directory " + a.run + " is missing " + f);
  }
  const auto world = alstl::io::world_from_json(alstl::io::read_json_file(dir / "world.json"));
  const auto q = alstl::io::qtable_from_json(alstl::io::read_json_file(dir / "qtable.json"));
  if (q.states() != world.state_count()) throw UsageError("Q-table does not match the world size");
  alstl::Rng slip = alstl::make_stream(a.seed, "rollout");
  const auto policy = alstl::rl::greedy_policy(q);
  std::vector<alstl::stl::Trajectory> trajs;
  int ok = 0;
  for (int i = 0; i < a.episodes; ++i) {
    trajs.push_back(alstl::env::rollout(world, policy, slip));
    if (alstl::env::terminal_reason(world, trajs.back()) == alstl::env::DoneReason::Goal) ++ok;
  }
  if (!a.output.empty()) {
    std::ofstream out(a.output);
    if (!out) throw UsageError("cannot write " + a.output);
    alstl::io::write_trajectories(out, trajs);
  }
  std::cout << "success " << ok << "/" << a.episodes << " = " << num(static_cast<double>(ok) / a.episodes) << '\n';
  return 0;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& run) {
  const fs::path root(run);
  if (!fs::is_directory(root)) throw UsageError("no run directory " + run);
  std::vector<fs::path> seeds;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / "metrics.csv")) seeds.push_back(e.path());
  }
  std::sort(seeds.begin(), seeds.end());
  if (seeds.empty()) throw UsageError("no seed runs under " + run);
  std::string header;
  for (const auto& dir : seeds) {
    std::ifstream in(dir / "metrics.csv");
    std::string line, last;
    std::getline(in, header);
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;
    }
    std::cout << dir.filename().string() << ": " << (last.empty() ? "(no cycles)" : last) << '\n';
  }
  std::cout << "columns: " << header << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STL-guided apprenticeship learning on reach-avoid gridworlds"};
  app.require_subcommand(1);

  DemoGenArgs dg;
  auto* demo = app.add_subcommand("demo-gen", "Generate demonstrations of varying quality (JSON Lines)");
  demo->add_option("--world", dg.world, "World file or built-in name (4x4, 8x8)");
  demo->add_option("-m,--count", dg.count, "Number of demonstrations");
  demo->add_option("--seed", dg.seed, "Seed for the demo-gen stream");
  demo->add_option("--max-detours", dg.max_detours, "Largest detour count (0 = auto)");
  demo->add_flag("--include-violating", dg.include_violating, "Add one demonstration ending in a hole");
  demo->add_option("-o,--output", dg.output, "Output file (default stdout)");

  EvaluateArgs ev;
  auto* eval = app.add_subcommand("evaluate", "Robustness vectors, DAGs and PGA for trajectories");
  eval->add_option("--specs", ev.specs, "Spec file (JSON)")->required();
  eval->add_option("--trajectories", ev.trajectories, "Trajectory file (JSON Lines)")->required();
  eval->add_option("--lambda", ev.lambda, "Edge-sum regularizer in [0, 1)");
  eval->add_option("--csv", ev.csv, "Write node_sum,edge_sum,pga rows here");
  eval->add_option("--dag-dir", ev.dag_dir, "Write per-trajectory DAG JSON and dot files here");

  ExperimentConfig ec;
  std::string config_path;
  auto* learn = app.add_subcommand("learn", "Run the apprenticeship loop for each seed");
  learn->add_option("--config", config_path, "Experiment config (JSON); flags override it");
  std::string merge_op, strategy;
  auto* o_world = learn->add_option("--world", ec.world, "World file or built-in name");
  auto* o_specs = learn->add_option("--specs", ec.specs, "Spec file (default: built-in reach-avoid specs)");
  auto* o_demos = learn->add_option("--demos", ec.demos, "Demonstration file (default: generate)");
  auto* o_m = learn->add_option("-m,--demo-count", ec.demo_count, "Generated demonstrations per seed");
  auto* o_viol = learn->add_flag("--include-violating", ec.include_violating, "Generate one violating demonstration");
  auto* o_seeds = learn->add_option("--seeds", ec.seeds, "Seeds, one run each")->delimiter(',');
  auto* o_delta = learn->add_option("--delta", ec.delta, "Robustness bound for built-in specs");
  auto* o_lambda = learn->add_option("--lambda", ec.loop.lambda, "Edge-sum regularizer in [0, 1)");
  auto* o_op = learn->add_option("--merge-op", merge_op, "min | max | mean");
  auto* o_strat = learn->add_option("--strategy", strategy, "strategic | naive | replace");
  auto* o_p = learn->add_option("--buffer-size", ec.loop.buffer_size, "Frontier/candidate capacity p");
  auto* o_k = learn->add_option("--rollouts", ec.loop.rollouts, "Candidate rollouts k per cycle");
  auto* o_cycles = learn->add_option("--max-cycles", ec.loop.max_cycles, "Cycle budget");
  auto* o_ts = learn->add_option("--timesteps", ec.timesteps, "Training steps per cycle (0 = auto)");
  auto* o_bonus = learn->add_option("--pga-bonus", ec.loop.pga_bonus_weight, "Terminal PGA bonus weight");
  auto* o_gamma = learn->add_option("--gamma", ec.loop.q_params.gamma, "Discount");
  auto* o_lr = learn->add_option("--learning-rate", ec.loop.q_params.learning_rate, "Q-learning step size");
  auto* o_eps0 = learn->add_option("--epsilon-initial", ec.loop.q_params.epsilon.initial, "Initial exploration rate");
  auto* o_eps1 = learn->add_option("--epsilon-floor", ec.loop.q_params.epsilon.floor, "Exploration floor");
  auto* o_decay = learn->add_option("--epsilon-decay-steps", ec.loop.q_params.epsilon.decay_steps, "Decay horizon");
  auto* o_ceps = learn->add_option("--candidate-epsilon", ec.loop.candidate_epsilon, "Exploration during candidate rollouts");
  auto* o_eval = learn->add_option("--eval-episodes", ec.loop.eval_episodes, "Greedy evaluation episodes per cycle");
  auto* o_thr = learn->add_option("--convergence-threshold", ec.loop.convergence_threshold, "|F - C| threshold");
  auto* o_minx = learn->add_option("--min-exploration-steps", ec.loop.min_exploration_steps, "Steps before convergence");
  auto* o_out = learn->add_option("-o,--output", ec.output, "Run directory");

  RolloutArgs ro;
  auto* roll = app.add_subcommand("rollout", "Greedy rollouts of a trained run");
  roll->add_option("--run", ro.run, "Seed run directory (contains world.json, qtable.json)")->required();
  roll->add_option("--episodes", ro.episodes, "Number of episodes");
  roll->add_option("--seed", ro.seed, "Seed for slip noise");
  roll->add_option("-o,--output", ro.output, "Write trajectories (JSON Lines)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize the final cycle of every seed in a run directory");
  report->add_option("--run", report_dir, "Run directory written by learn")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*demo) return cmd_demo_gen(dg);
    if (*eval) return cmd_evaluate(ev);
    if (*learn) {
      ExperimentConfig c;
      if (!config_path.empty()) apply_config_json(c, alstl::io::read_json_file(config_path));
      // Flags given on the command line win over the config file.
      auto over = [](CLI::Option* o, auto& dst, const auto& src) {
        if (o->count() > 0) dst = src;
      };
      over(o_world, c.world, ec.world);
      over(o_specs, c.specs, ec.specs);
      over(o_demos, c.demos, ec.demos);
      over(o_m, c.demo_count, ec.demo_count);
      over(o_viol, c.include_violating, ec.include_violating);
      over(o_seeds, c.seeds, ec.seeds);
      over(o_delta, c.delta, ec.delta);
      over(o_lambda, c.loop.lambda, ec.loop.lambda);
      if (o_op->count() > 0) c.loop.op = alstl::loop::parse_merge_op(merge_op);
      if (o_strat->count() > 0) c.loop.strategy = alstl::loop::parse_update_strategy(strategy);
      over(o_p, c.loop.buffer_size, ec.loop.buffer_size);
      over(o_k, c.loop.rollouts, ec.loop.rollouts);
      over(o_cycles, c.loop.max_cycles, ec.loop.max_cycles);
      over(o_ts, c.timesteps, ec.timesteps);
      over(o_bonus, c.loop.pga_bonus_weight, ec.loop.pga_bonus_weight);
      over(o_gamma, c.loop.q_params.gamma, ec.loop.q_params.gamma);
      over(o_lr, c.loop.q_params.learning_rate, ec.loop.q_params.learning_rate);
      over(o_eps0, c.loop.q_params.epsilon.initial, ec.loop.q_params.epsilon.initial);
      over(o_eps1, c.loop.q_params.epsilon.floor, ec.loop.q_params.epsilon.floor);
      over(o_decay, c.loop.q_params.epsilon.decay_steps, ec.loop.q_params.epsilon.decay_steps);
      over(o_ceps, c.loop.candidate_epsilon, ec.loop.candidate_epsilon);
      over(o_eval, c.loop.eval_episodes, ec.loop.eval_episodes);
      over(o_thr, c.loop.convergence_threshold, ec.loop.convergence_threshold);
      over(o_minx, c.loop.min_exploration_steps, ec.loop.min_exploration_steps);
      over(o_out, c.output, ec.output);
      const bool decay_set = o_decay->count() > 0 || (!config_path.empty() &&
                                                      alstl::io::read_json_file(config_path).contains("epsilon_decay_steps"));
      return cmd_learn(c, decay_set);
    }
    if (*roll) return cmd_rollout(ro);
    if (*report) return cmd_report(report_dir);
  } catch (const alstl::env::UnsolvableWorldError& e) {
    std::cerr << "error: unsolvable world: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::stl::StlError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::io::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::env::EnvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::loop::LoopError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::graph::GraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const alstl::rl::RlError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
