#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alstl/al_loop.hpp"
#include "alstl/gridworld.hpp"
#include "alstl/perf_graph.hpp"
#include "alstl/reward_model.hpp"
#include "alstl/rl.hpp"
#include "alstl/stl.hpp"

namespace alstl::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trajectory JSON Lines: {"schema": [names], "samples": [[reals]]}, with an
// optional "actions" array.
json to_json(const stl::Trajectory& tau);
stl::Trajectory trajectory_from_json(const json& j);
void write_trajectories(std::ostream& os, const std::vector<stl::Trajectory>& trajs);
std::vector<stl::Trajectory> read_trajectories(std::istream& is);

// Spec file: {"specs": [{"name", "formula", "raw_min", "raw_max"}], "delta"}.
json to_json(const stl::SpecSet& specs);
stl::SpecSet spec_set_from_json(const json& j, const stl::Schema& schema = {});

// World file: {width, height, start, goal, holes: [[r,c]], max_steps, slip_prob}.
json to_json(const env::GridWorld& world);
env::GridWorld world_from_json(const json& j);

// Reward table: {default, entries: [{state, reward}]}.
json to_json(const reward::RewardTable& table);
reward::RewardTable reward_table_from_json(const json& j);

// Q-table: {gamma, entries: [{state, action, q}]}.
json to_json(const rl::QTable& q);
rl::QTable qtable_from_json(const json& j);

// DAG export: {nodes: [{spec, value, raw_weight, weight}], edges: [{src, dst, weight}], node_sum, edge_sum}.
json to_json(const graph::PerfDag& dag);

json to_json(const loop::CycleReport& r);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// Loads a world from a JSON file, or one of the built-in names "4x4", "8x8".
env::GridWorld load_world(const std::string& name_or_path);

}  // namespace alstl::io
