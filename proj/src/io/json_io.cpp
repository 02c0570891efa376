#include "alstl/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace alstl::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const stl::Trajectory& tau) {
  json schema = json::array();
  for (const auto& c : tau.schema()) schema.push_back(c.name);
  json samples = json::array();
  for (std::size_t t = 0; t < tau.sample_count(); ++t) {
    const auto s = tau.sample(t);
    samples.push_back(std::vector<double>(s.begin(), s.end()));
  }
  json j{{"schema", schema}, {"samples", samples}};
  if (!tau.actions().empty()) j["actions"] = tau.actions();
  return j;
}

stl::Trajectory trajectory_from_json(const json& j) {
  const auto names = field<std::vector<std::string>>(j, "schema");
  auto samples = field<std::vector<std::vector<double>>>(j, "samples");
  std::vector<int> actions;
  if (j.contains("actions")) actions = field<std::vector<int>>(j, "actions");
  try {
    return stl::Trajectory(stl::make_schema(names), std::move(samples), std::move(actions));
  } catch (const stl::StlError& e) {
    throw FormatError(e.what());
  }
}

void write_trajectories(std::ostream& os, const std::vector<stl::Trajectory>& trajs) {
  for (const auto& t : trajs) os << to_json(t).dump() << '\n';
}

std::vector<stl::Trajectory> read_trajectories(std::istream& is) {
  std::vector<stl::Trajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trajectory_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

json to_json(const stl::SpecSet& specs) {
  json arr = json::array();
  for (const auto& s : specs.specs) {
    arr.push_back({{"name", s.name}, {"formula", s.text}, {"raw_min", s.bounds.raw_min}, {"raw_max", s.bounds.raw_max}});
  }
  return {{"specs", arr}, {"delta", specs.delta}};
}

stl::SpecSet spec_set_from_json(const json& j, const stl::Schema& schema) {
  stl::SpecSet set;
  set.delta = field<double>(j, "delta");
  const json& arr = j.at("specs");
  if (!arr.is_array() || arr.empty()) throw FormatError("'specs' must be a non-empty array");
  for (const auto& s : arr) {
    stl::RobustnessBounds b{set.delta, field<double>(s, "raw_min"), field<double>(s, "raw_max")};
    try {
      stl::validate(b);
    } catch (const stl::StlError& e) {
      throw FormatError(e.what());
    }
    set.specs.push_back(stl::make_spec(field<std::string>(s, "name"), field<std::string>(s, "formula"), b, schema));
  }
  return set;
}

json to_json(const env::GridWorld& w) {
  json holes = json::array();
  for (const auto& h : w.holes()) holes.push_back({h.row, h.col});
  return {{"width", w.width()},
          {"height", w.height()},
          {"start", {w.start().row, w.start().col}},
          {"goal", {w.goal().row, w.goal().col}},
          {"holes", holes},
          {"max_steps", w.max_steps()},
          {"slip_prob", w.slip_prob()}};
}

env::GridWorld world_from_json(const json& j) {
  auto cell = [](const std::vector<int>& v, const char* what) {
    if (v.size() != 2) throw FormatError(std::string(what) + " must be [row, col]");
    return env::Cell{v[0], v[1]};
  };
  std::set<env::Cell> holes;
  for (const auto& h : field<std::vector<std::vector<int>>>(j, "holes")) holes.insert(cell(h, "hole"));
  const double slip = j.contains("slip_prob") ? field<double>(j, "slip_prob") : 0.0;
  try {
    return env::GridWorld(field<int>(j, "width"), field<int>(j, "height"), cell(field<std::vector<int>>(j, "start"), "start"),
                          cell(field<std::vector<int>>(j, "goal"), "goal"), std::move(holes), field<int>(j, "max_steps"),
                          slip);
  } catch (const env::EnvError& e) {
    throw FormatError(e.what());
  }
}

json to_json(const reward::RewardTable& table) {
  json entries = json::array();
  for (const auto& [s, r] : table.entries()) entries.push_back({{"state", s}, {"reward", r}});
  return {{"default", table.default_reward()}, {"entries", entries}};
}

reward::RewardTable reward_table_from_json(const json& j) {
  reward::RewardTable t(field<double>(j, "default"));
  for (const auto& e : j.at("entries")) t.set(field<int>(e, "state"), field<double>(e, "reward"));
  return t;
}

json to_json(const rl::QTable& q) {
  json entries = json::array();
  for (int s = 0; s < q.states(); ++s) {
    for (int a = 0; a < q.actions(); ++a) entries.push_back({{"state", s}, {"action", a}, {"q", q.at(s, a)}});
  }
  return {{"gamma", q.gamma()}, {"states", q.states()}, {"actions", q.actions()}, {"entries", entries}};
}

rl::QTable qtable_from_json(const json& j) {
  const json& entries = j.at("entries");
  int states = j.contains("states") ? field<int>(j, "states") : 0;
  int actions = j.contains("actions") ? field<int>(j, "actions") : 0;
  if (states == 0 || actions == 0) {
    for (const auto& e : entries) {
      states = std::max(states, field<int>(e, "state") + 1);
      actions = std::max(actions, field<int>(e, "action") + 1);
    }
  }
  rl::QParams p;
  p.gamma = field<double>(j, "gamma");
  rl::QTable q(states, actions, p);
  for (const auto& e : entries) q.at(field<int>(e, "state"), field<int>(e, "action")) = field<double>(e, "q");
  return q;
}

json to_json(const graph::PerfDag& dag) {
  json nodes = json::array();
  for (const auto& n : dag.nodes()) {
    nodes.push_back({{"spec", n.spec}, {"value", n.value}, {"raw_weight", n.raw_weight}, {"weight", n.weight}});
  }
  json edges = json::array();
  for (const auto& e : dag.edges()) {
    edges.push_back({{"src", dag.nodes()[e.src].spec}, {"dst", dag.nodes()[e.dst].spec}, {"weight", e.weight}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"node_sum", graph::node_sum(dag)}, {"edge_sum", graph::edge_sum(dag)}};
}

json to_json(const loop::CycleReport& r) {
  json weights = json::object();
  for (std::size_t i = 0; i < r.spec_ids.size(); ++i) weights[r.spec_ids[i]] = r.spec_weights[i];
  return {{"cycle", r.cycle},
          {"frontier_metric", r.frontier_metric},
          {"candidate_metric", r.candidate_metric},
          {"spec_weights", weights},
          {"success_rate", r.success_rate},
          {"mean_pga", r.mean_pga},
          {"updated", r.updated},
          {"converged", r.converged},
          {"timesteps", r.timesteps}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

env::GridWorld load_world(const std::string& name_or_path) {
  if (name_or_path == "4x4") return env::GridWorld::frozenlake4x4();
  if (name_or_path == "8x8") return env::GridWorld::frozenlake8x8();
  return world_from_json(read_json_file(name_or_path));
}

}  // namespace alstl::io
