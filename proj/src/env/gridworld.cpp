#include "alstl/gridworld.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace alstl::env {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

std::string_view reason_name(DoneReason r) {
  switch (r) {
    case DoneReason::Running: return "running";
    case DoneReason::Goal: return "goal";
    case DoneReason::Hole: return "hole";
    case DoneReason::Timeout: return "timeout";
  }
  return "?";
}

GridWorld::GridWorld(int width, int height, Cell start, Cell goal, std::set<Cell> holes, int max_steps,
                     double slip_prob)
    : width_(width),
      height_(height),
      start_(start),
      goal_(goal),
      holes_(std::move(holes)),
      max_steps_(max_steps),
      slip_prob_(slip_prob) {
  if (width_ <= 0 || height_ <= 0) throw EnvError("grid dimensions must be positive");
  if (max_steps_ <= 0) throw EnvError("max_steps must be positive");
  if (!(slip_prob_ >= 0.0 && slip_prob_ < 1.0)) throw EnvError("slip_prob must lie in [0, 1)");
  if (!in_bounds(start_) || !in_bounds(goal_)) throw EnvError("start and goal must lie inside the grid");
  if (start_ == goal_) throw EnvError("start and goal must differ");
  for (const Cell& h : holes_) {
    if (!in_bounds(h)) throw EnvError("hole (" + std::to_string(h.row) + "," + std::to_string(h.col) + ") is outside the grid");
  }
  if (is_hole(start_)) throw EnvError("start cell is a hole");
  if (is_hole(goal_)) throw EnvError("goal cell is a hole");
}

GridWorld GridWorld::from_map(const std::vector<std::string>& rows, int max_steps, double slip_prob) {
  if (rows.empty()) throw EnvError("empty map");
  const int w = static_cast<int>(rows.front().size());
  std::optional<Cell> start, goal;
  std::set<Cell> holes;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    if (static_cast<int>(rows[r].size()) != w) throw EnvError("map rows differ in width");
    for (int c = 0; c < w; ++c) {
      switch (rows[r][c]) {
        case 'S': start = Cell{r, c}; break;
        case 'G': goal = Cell{r, c}; break;
        case 'H': holes.insert({r, c}); break;
        case 'F': break;
        default: throw EnvError(std::string("unknown map tile '") + rows[r][c] + "'");
      }
    }
  }
  if (!start || !goal) throw EnvError("map needs one 'S' and one 'G'");
  return GridWorld(w, static_cast<int>(rows.size()), *start, *goal, std::move(holes), max_steps, slip_prob);
}

GridWorld GridWorld::frozenlake4x4() {
  return from_map({"SFFF", "FHFH", "FFFH", "HFFG"}, 20);
}

GridWorld GridWorld::frozenlake8x8() {
  return from_map({"SFFFFFFF", "FFFFFFFF", "FFFHFFFF", "FFFFFHFF", "FFFHFFFF", "FHHFFFHF", "FHFFHFHF", "FFFHFFFG"},
                  50);
}

GridWorld GridWorld::random(int size, double hole_prob, int max_steps, Rng& rng) {
  if (size < 2) throw EnvError("random map needs size >= 2");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::set<Cell> holes;
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        const Cell cell{r, c};
        if (cell == Cell{0, 0} || cell == Cell{size - 1, size - 1}) continue;
        if (uniform01(rng) < hole_prob) holes.insert(cell);
      }
    }
    GridWorld w(size, size, {0, 0}, {size - 1, size - 1}, std::move(holes), max_steps);
    if (auto plan = shortest_safe_plan(w); plan && static_cast<int>(plan->size()) <= max_steps) return w;
  }
  throw UnsolvableWorldError("could not sample a solvable map");
}

std::vector<StateId> GridWorld::all_states() const {
  std::vector<StateId> out(static_cast<std::size_t>(state_count()));
  for (int s = 0; s < state_count(); ++s) out[s] = s;
  return out;
}

Cell GridWorld::move(Cell c, Action a) const noexcept {
  Cell n = c;
  switch (a) {
    case Action::Up: --n.row; break;
    case Action::Down: ++n.row; break;
    case Action::Left: --n.col; break;
    case Action::Right: ++n.col; break;
  }
  return in_bounds(n) ? n : c;
}

int GridWorld::step_threshold() const { return max_steps_ / 2; }

std::vector<std::string> GridWorld::render() const {
  std::vector<std::string> rows(height_, std::string(width_, 'F'));
  for (const Cell& h : holes_) rows[h.row][h.col] = 'H';
  rows[start_.row][start_.col] = 'S';
  rows[goal_.row][goal_.col] = 'G';
  return rows;
}

namespace {

Action rotate_left(Action a) {
  switch (a) {
    case Action::Up: return Action::Left;
    case Action::Left: return Action::Down;
    case Action::Down: return Action::Right;
    case Action::Right: return Action::Up;
  }
  return a;
}

Action rotate_right(Action a) {
  switch (a) {
    case Action::Up: return Action::Right;
    case Action::Right: return Action::Down;
    case Action::Down: return Action::Left;
    case Action::Left: return Action::Up;
  }
  return a;
}

Action opposite(Action a) {
  switch (a) {
    case Action::Up: return Action::Down;
    case Action::Down: return Action::Up;
    case Action::Left: return Action::Right;
    case Action::Right: return Action::Left;
  }
  return a;
}

std::vector<double> sample_for(const GridWorld& world, StateId s, int t) {
  const Cell c = world.cell(s);
  return {static_cast<double>(s),
          static_cast<double>(c.row),
          static_cast<double>(c.col),
          c == world.goal() ? 1.0 : -1.0,
          world.is_hole(c) ? -1.0 : 1.0,
          static_cast<double>(world.max_steps() - t)};
}

}  // namespace

Transition step(const GridWorld& world, StateId state, Action action, int t, Rng& rng) {
  if (state < 0 || state >= world.state_count()) throw EnvError("state out of range");
  if (world.is_terminal(state)) throw EnvError("cannot step from a terminal state");
  if (t >= world.max_steps()) throw EnvError("episode horizon exhausted");
  Action effective = action;
  if (world.slip_prob() > 0.0) {
    const double u = uniform01(rng);
    if (u < world.slip_prob() / 2) {
      effective = rotate_left(action);
    } else if (u < world.slip_prob()) {
      effective = rotate_right(action);
    }
  }
  Transition tr;
  tr.state = state;
  tr.action = action;
  const Cell next = world.move(world.cell(state), effective);
  tr.next_state = world.id(next);
  if (next == world.goal()) {
    tr.reason = DoneReason::Goal;
  } else if (world.is_hole(next)) {
    tr.reason = DoneReason::Hole;
  } else if (t + 1 >= world.max_steps()) {
    tr.reason = DoneReason::Timeout;
  }
  tr.done = tr.reason != DoneReason::Running;
  return tr;
}

stl::Schema trajectory_schema() {
  return {{"state", "cell id row*width+col"},
          {"row", "cell row"},
          {"col", "cell column"},
          {"goal_reached", "+1 on the goal cell, -1 elsewhere"},
          {"safe", "-1 on a hole cell, +1 elsewhere"},
          {"steps_left", "max_steps - t"}};
}

namespace {

template <class NextAction>
stl::Trajectory run_episode(const GridWorld& world, NextAction next_action, Rng& rng) {
  std::vector<std::vector<double>> samples;
  std::vector<int> actions;
  StateId s = world.id(world.start());
  samples.push_back(sample_for(world, s, 0));
  for (int t = 0; t < world.max_steps(); ++t) {
    std::optional<Action> a = next_action(s, t);
    if (!a) break;
    const Transition tr = step(world, s, *a, t, rng);
    actions.push_back(static_cast<int>(*a));
    s = tr.next_state;
    samples.push_back(sample_for(world, s, t + 1));
    if (tr.done) break;
  }
  return stl::Trajectory(trajectory_schema(), std::move(samples), std::move(actions));
}

}  // namespace

stl::Trajectory trajectory_from_states(const GridWorld& world, const std::vector<StateId>& states,
                                       std::vector<int> actions) {
  std::vector<std::vector<double>> samples;
  samples.reserve(states.size());
  for (std::size_t t = 0; t < states.size(); ++t) samples.push_back(sample_for(world, states[t], static_cast<int>(t)));
  return stl::Trajectory(trajectory_schema(), std::move(samples), std::move(actions));
}

stl::Trajectory rollout(const GridWorld& world, const Policy& policy, Rng& rng) {
  return run_episode(world, [&](StateId s, int) -> std::optional<Action> { return policy(s); }, rng);
}

stl::Trajectory replay(const GridWorld& world, const std::vector<Action>& plan, Rng& rng) {
  return run_episode(
      world,
      [&](StateId, int t) -> std::optional<Action> {
        if (t >= static_cast<int>(plan.size())) return std::nullopt;
        return plan[t];
      },
      rng);
}

DoneReason terminal_reason(const GridWorld& world, const stl::Trajectory& tau) {
  const auto states = tau.channel_values(0);
  const Cell last = world.cell(static_cast<StateId>(states.back()));
  if (last == world.goal()) return DoneReason::Goal;
  if (world.is_hole(last)) return DoneReason::Hole;
  if (static_cast<int>(tau.last_index()) >= world.max_steps()) return DoneReason::Timeout;
  return DoneReason::Running;
}

namespace {

// BFS over safe cells from `from`; returns the action plan to the first cell
// accepted by `is_target`. Holes are never expanded, but may be targets.
template <class Target>
std::optional<std::vector<Action>> bfs_plan(const GridWorld& world, Cell from, Target is_target) {
  std::map<Cell, std::pair<Cell, Action>> parent;
  std::set<Cell> seen{from};
  std::deque<Cell> queue{from};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (is_target(c) && !(c == from)) {
      std::vector<Action> plan;
      for (Cell cur = c; !(cur == from);) {
        const auto& [prev, a] = parent.at(cur);
        plan.push_back(a);
        cur = prev;
      }
      std::reverse(plan.begin(), plan.end());
      return plan;
    }
    if (world.is_hole(c) || c == world.goal()) continue;
    for (Action a : kActions) {
      const Cell n = world.move(c, a);
      if (seen.contains(n)) continue;
      seen.insert(n);
      parent[n] = {c, a};
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Action>> shortest_safe_plan(const GridWorld& world, Cell from) {
  return bfs_plan(world, from, [&](Cell c) { return c == world.goal(); });
}

std::optional<std::vector<Action>> shortest_safe_plan(const GridWorld& world) {
  return shortest_safe_plan(world, world.start());
}

std::vector<stl::Trajectory> generate_demos(const GridWorld& world, int m, const DemoMix& mix, Rng& rng) {
  if (m <= 0) throw EnvError("demo count must be positive");
  const auto best = shortest_safe_plan(world);
  if (!best || static_cast<int>(best->size()) > world.max_steps()) {
    throw UnsolvableWorldError("no safe path from start to goal within the step budget");
  }

  std::vector<std::vector<Action>> plans{*best};
  std::optional<std::vector<Action>> violating;
  if (mix.include_violating && m > 1) {
    violating = bfs_plan(world, world.start(), [&](Cell c) { return world.is_hole(c); });
  }
  const int detoured = m - 1 - (violating ? 1 : 0);
  const int max_detours =
      mix.max_detours > 0
          ? mix.max_detours
          : std::max(1, (world.max_steps() - world.step_threshold() - static_cast<int>(best->size())) / 2 + 1);

  for (int i = 0; i < detoured; ++i) {
    // Detour counts spread over 1..max_detours so demo quality varies.
    const int want = detoured == 1 ? max_detours : 1 + (i * (max_detours - 1)) / std::max(1, detoured - 1);
    std::vector<Action> plan;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      plan = *best;
      int placed = 0;
      for (int guard = 0; placed < std::max(1, want) && guard < 1000; ++guard) {
        // Replay the plan prefix to find the cell at a random insertion point.
        // Inserting after the last action would never be executed.
        const int at = uniform_index(rng, static_cast<int>(plan.size()));
        Cell c = world.start();
        for (int k = 0; k < at; ++k) c = world.move(c, plan[k]);
        const Action a = kActions[uniform_index(rng, kActionCount)];
        const Cell side = world.move(c, a);
        if (side == c || world.is_hole(side) || side == world.goal()) continue;
        plan.insert(plan.begin() + at, {a, opposite(a)});
        ++placed;
      }
      if (std::find(plans.begin(), plans.end(), plan) == plans.end()) break;
    }
    plans.push_back(std::move(plan));
  }
  if (violating) plans.push_back(*violating);

  std::vector<stl::Trajectory> demos;
  demos.reserve(plans.size());
  for (const auto& p : plans) demos.push_back(replay(world, p, rng));
  return demos;
}

stl::SpecSet builtin_specs(const GridWorld& world, double delta) {
  const stl::Schema schema = trajectory_schema();
  const stl::RobustnessBounds unit{delta, -1.0, 1.0};
  stl::SpecSet set;
  set.delta = delta;
  set.specs.push_back(stl::make_spec("reach_goal", "F(goal_reached > 0)", unit, schema));
  set.specs.push_back(stl::make_spec("stay_safe", "G(safe > 0)", unit, schema));
  set.specs.push_back(stl::make_spec(
      "few_steps", "F(goal_reached > 0 and steps_left > " + std::to_string(world.step_threshold()) + ")", unit, schema));
  return set;
}

}  // namespace alstl::env
