#pragma once

#include "curriculum/env_types.hpp"
#include "curriculum/mapping.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace curriculum {

namespace predator_prey {
inline constexpr const char* kFoodFractionParam = "food_fraction";
inline constexpr const char* kPredatorStallParam = "predator_stall";
} // namespace predator_prey

struct PredatorPreyConfig {
  int size = 11;
  int initial_health = 100;
  int health_cap = 100;
  int max_steps = 1000;
  int food_restore = 10;
  int catch_damage = 100;

  void validate() const;
};

struct PredatorPreyState {
  Cell agent;
  Cell predator;
  std::vector<std::uint8_t> food; // row-major occupancy, size * size
  int health = 0;
  int predator_stall_remaining = 0;
  int steps = 0;

  int food_count() const noexcept;
  bool has_food(Cell cell, int size) const;

  friend bool operator==(const PredatorPreyState&, const PredatorPreyState&) = default;
};

/// Survival grid with a chasing predator.
///
/// One step applies, in order: agent move (clamped to the board), one point
/// of health decay, food pickup (+restore, capped, food respawns on a random
/// empty cell), predator move, catch. The predator takes one greedy step that
/// reduces Manhattan distance, vertical axis first, and sits still while
/// stalled. A catch costs `catch_damage` and stalls the predator for the
/// task's stall duration. Reward is the health difference across the step.
class PredatorPrey {
public:
  explicit PredatorPrey(PredatorPreyConfig config = {});

  /// Seeds the episode's internal generator from `rng`.
  const PredatorPreyState& reset(const TaskParameters& task, std::mt19937_64& rng);

  /// Throws std::logic_error when the episode has already finished.
  Transition<PredatorPreyState> step(Action action);

  const PredatorPreyState& state() const noexcept { return state_; }
  const PredatorPreyConfig& config() const noexcept { return config_; }
  bool done() const noexcept { return done_; }
  int stall_duration() const noexcept { return stall_duration_; }

  /// Three size x size channels (agent, predator, food), row-major, 0/1.
  std::vector<std::uint8_t> observation() const;

  static int food_count_for(double fraction, int size);

private:
  Cell random_empty_cell();
  std::size_t index(Cell cell) const noexcept {
    return static_cast<std::size_t>(cell.row * config_.size + cell.col);
  }

  PredatorPreyConfig config_;
  PredatorPreyState state_;
  std::mt19937_64 rng_;
  int stall_duration_ = 0;
  bool done_ = true;
};

} // namespace curriculum
