#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alstl/rng.hpp"
#include "alstl/stl.hpp"

namespace alstl::env {

class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsolvableWorldError : public EnvError {
 public:
  using EnvError::EnvError;
};

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };
constexpr int kActionCount = 4;
constexpr std::array<Action, kActionCount> kActions{Action::Up, Action::Down, Action::Left, Action::Right};
std::string_view action_name(Action a);

enum class DoneReason { Running, Goal, Hole, Timeout };
std::string_view reason_name(DoneReason r);

using StateId = int;

/// Frozenlake-style reach-avoid grid.
class GridWorld {
 public:
  GridWorld(int width, int height, Cell start, Cell goal, std::set<Cell> holes, int max_steps, double slip_prob = 0.0);

  /// Parses rows of 'S', 'F', 'H', 'G'.
  static GridWorld from_map(const std::vector<std::string>& rows, int max_steps, double slip_prob = 0.0);
  static GridWorld frozenlake4x4();
  static GridWorld frozenlake8x8();
  /// Random map with hole density `hole_prob`, resampled until a safe path exists.
  static GridWorld random(int size, double hole_prob, int max_steps, Rng& rng);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Cell start() const noexcept { return start_; }
  Cell goal() const noexcept { return goal_; }
  const std::set<Cell>& holes() const noexcept { return holes_; }
  int max_steps() const noexcept { return max_steps_; }
  double slip_prob() const noexcept { return slip_prob_; }

  int state_count() const noexcept { return width_ * height_; }
  StateId id(Cell c) const noexcept { return c.row * width_ + c.col; }
  Cell cell(StateId s) const noexcept { return {s / width_, s % width_}; }
  bool in_bounds(Cell c) const noexcept { return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_; }
  bool is_hole(Cell c) const { return holes_.contains(c); }
  bool is_terminal(StateId s) const { return cell(s) == goal_ || is_hole(cell(s)); }
  std::vector<StateId> all_states() const;

  /// Deterministic successor; moves off the grid leave the agent in place.
  Cell move(Cell c, Action a) const noexcept;

  /// Step-budget threshold used by the "few steps" spec.
  int step_threshold() const;

  std::vector<std::string> render() const;

 private:
  int width_;
  int height_;
  Cell start_;
  Cell goal_;
  std::set<Cell> holes_;
  int max_steps_;
  double slip_prob_;
};

struct Transition {
  StateId state = 0;
  Action action = Action::Up;
  StateId next_state = 0;
  bool done = false;
  DoneReason reason = DoneReason::Running;
};

/// One environment step. `t` is the index of the step being taken (0-based);
/// the episode times out once t+1 reaches max_steps.
Transition step(const GridWorld& world, StateId state, Action action, int t, Rng& rng);

/// Channels registered with the monitor for gridworld trajectories.
stl::Schema trajectory_schema();

using Policy = std::function<Action(StateId)>;

/// Runs `policy` from the start cell until goal, hole or timeout. The first
/// sample is the start state; every action appends one sample.
stl::Trajectory rollout(const GridWorld& world, const Policy& policy, Rng& rng);

/// Builds the monitored trajectory for a visited state sequence (states[0] is
/// the start sample).
stl::Trajectory trajectory_from_states(const GridWorld& world, const std::vector<StateId>& states,
                                       std::vector<int> actions = {});

/// Executes a fixed action plan (stopping early on termination).
stl::Trajectory replay(const GridWorld& world, const std::vector<Action>& plan, Rng& rng);

DoneReason terminal_reason(const GridWorld& world, const stl::Trajectory& tau);

/// Breadth-first shortest action sequence from `from` to the goal avoiding
/// holes; empty optional when unreachable.
std::optional<std::vector<Action>> shortest_safe_plan(const GridWorld& world, Cell from);
std::optional<std::vector<Action>> shortest_safe_plan(const GridWorld& world);

struct DemoMix {
  /// Upper bound on detour pairs (step aside and back) added to suboptimal
  /// demos. 0 picks the smallest count that makes the worst demo miss the
  /// step budget.
  int max_detours = 0;
  /// Include one demonstration that ends in a hole.
  bool include_violating = false;
};

/// m demonstrations: the shortest safe path first, then detoured variants
/// (and optionally one violating demo). Throws UnsolvableWorldError when the
/// goal cannot be reached safely.
std::vector<stl::Trajectory> generate_demos(const GridWorld& world, int m, const DemoMix& mix, Rng& rng);

/// The built-in reach-avoid specification set: reach the goal, stay safe, and
/// reach the goal with steps to spare.
stl::SpecSet builtin_specs(const GridWorld& world, double delta = 1.0);

}  // namespace alstl::env
