#pragma once

#include "curriculum/env_types.hpp"
#include "curriculum/gridworld_layout.hpp"
#include "curriculum/mapping.hpp"

#include <memory>
#include <random>

namespace curriculum {

namespace gridworld {
inline constexpr double kTreasureReward = 200.0;
inline constexpr double kPitReward = -2500.0;
inline constexpr double kFireReward = -500.0;
inline constexpr double kFireAdjacentReward = -250.0;
inline constexpr double kStepReward = -1.0;
inline constexpr int kMaxActions = 50;
inline constexpr const char* kStartDistanceParam = "start_distance";
} // namespace gridworld

struct GridWorldState {
  Cell agent;
  int steps_taken = 0;

  friend bool operator==(const GridWorldState&, const GridWorldState&) = default;
};

/// Reward for entering `cell`.
double gridworld_entry_reward(const GridWorldLayout& layout, Cell cell);

/// Deterministic treasure maze. Moves off the grid leave the agent in place
/// at the plain step cost.
class GridWorld {
public:
  explicit GridWorld(std::shared_ptr<const GridWorldLayout> layout,
                     int max_actions = gridworld::kMaxActions);

  /// Places the agent at a start cell chosen for the task's start distance.
  const GridWorldState& reset(const TaskParameters& task, std::mt19937_64& rng);
  const GridWorldState& reset_at(Cell start);

  /// Throws std::logic_error when the episode has already finished.
  Transition<GridWorldState> step(Action action);

  const GridWorldState& state() const noexcept { return state_; }
  bool done() const noexcept { return done_; }
  const GridWorldLayout& layout() const noexcept { return *layout_; }
  int max_actions() const noexcept { return max_actions_; }

private:
  std::shared_ptr<const GridWorldLayout> layout_;
  int max_actions_;
  GridWorldState state_;
  bool done_ = true;
};

/// Lowest return of an episode that starts on the designated start, walks
/// only plain cells and reaches the treasure within the action budget.
/// Throws std::runtime_error when no such episode exists.
double min_successful_return(const GridWorldLayout& layout,
                             int max_actions = gridworld::kMaxActions);

} // namespace curriculum
