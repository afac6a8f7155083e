#include "curriculum/predator_prey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace curriculum {

void PredatorPreyConfig::validate() const {
  if (size < 2) throw std::invalid_argument("predator-prey board must be at least 2x2");
  if (initial_health < 1) throw std::invalid_argument("initial health must be positive");
  if (health_cap < initial_health) throw std::invalid_argument("health cap below initial health");
  if (max_steps < 1) throw std::invalid_argument("predator-prey step cap must be >= 1");
}

int PredatorPreyState::food_count() const noexcept {
  return static_cast<int>(std::count(food.begin(), food.end(), std::uint8_t{1}));
}

bool PredatorPreyState::has_food(Cell cell, int size) const {
  return food.at(static_cast<std::size_t>(cell.row * size + cell.col)) != 0;
}

PredatorPrey::PredatorPrey(PredatorPreyConfig config) : config_(config) { config_.validate(); }

int PredatorPrey::food_count_for(double fraction, int size) {
  const int cells = size * size;
  const auto count = static_cast<int>(std::lround(fraction * cells));
  return std::clamp(count, 1, cells - 2);
}

const PredatorPreyState& PredatorPrey::reset(const TaskParameters& task, std::mt19937_64& rng) {
  const double fraction = task.at(predator_prey::kFoodFractionParam);
  const double stall = task.at(predator_prey::kPredatorStallParam);
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("food fraction must lie in [0, 1]");
  }
  stall_duration_ = std::max(0, static_cast<int>(std::lround(stall)));
  rng_.seed(rng());

  const int cells = config_.size * config_.size;
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng_);

  const int food = food_count_for(fraction, config_.size);
  state_ = PredatorPreyState{};
  state_.food.assign(static_cast<std::size_t>(cells), 0);
  for (int k = 0; k < food; ++k) {
    state_.food[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
  }
  const int a = order[static_cast<std::size_t>(food)];
  const int p = order[static_cast<std::size_t>(food + 1)];
  state_.agent = {a / config_.size, a % config_.size};
  state_.predator = {p / config_.size, p % config_.size};
  state_.health = config_.initial_health;
  state_.predator_stall_remaining = 0;
  state_.steps = 0;
  done_ = false;
  return state_;
}

Cell PredatorPrey::random_empty_cell() {
  std::vector<Cell> empty;
  for (int r = 0; r < config_.size; ++r) {
    for (int c = 0; c < config_.size; ++c) {
      const Cell cell{r, c};
      if (cell == state_.agent || cell == state_.predator || state_.food[index(cell)]) continue;
      empty.push_back(cell);
    }
  }
  if (empty.empty()) return state_.agent;
  std::uniform_int_distribution<std::size_t> pick(0, empty.size() - 1);
  return empty[pick(rng_)];
}

Transition<PredatorPreyState> PredatorPrey::step(Action action) {
  if (done_) {
    throw std::logic_error("predator-prey stepped after the episode finished");
  }
  const int before = state_.health;

  const Cell target = moved(state_.agent, action);
  if (target.row >= 0 && target.row < config_.size && target.col >= 0 &&
      target.col < config_.size) {
    state_.agent = target;
  }

  state_.health -= 1;

  if (state_.food[index(state_.agent)]) {
    state_.health = std::min(config_.health_cap, state_.health + config_.food_restore);
    state_.food[index(state_.agent)] = 0;
    const Cell spawn = random_empty_cell();
    if (spawn != state_.agent) state_.food[index(spawn)] = 1;
  }

  if (state_.predator_stall_remaining > 0) {
    --state_.predator_stall_remaining;
  } else {
    const int dr = state_.agent.row - state_.predator.row;
    const int dc = state_.agent.col - state_.predator.col;
    if (dr != 0) {
      state_.predator.row += dr > 0 ? 1 : -1;
    } else if (dc != 0) {
      state_.predator.col += dc > 0 ? 1 : -1;
    }
    if (state_.predator == state_.agent) {
      state_.health -= config_.catch_damage;
      state_.predator_stall_remaining = stall_duration_;
    }
  }

  ++state_.steps;

  Transition<PredatorPreyState> t;
  t.reward = static_cast<double>(state_.health - before);
  if (state_.health <= 0) {
    t.done_reason = DoneReason::health_depleted;
  } else if (state_.steps >= config_.max_steps) {
    t.done_reason = DoneReason::time_limit;
  }
  t.done = t.done_reason.has_value();
  done_ = t.done;
  t.next_state = state_;
  return t;
}

std::vector<std::uint8_t> PredatorPrey::observation() const {
  const auto plane = static_cast<std::size_t>(config_.size * config_.size);
  std::vector<std::uint8_t> obs(3 * plane, 0);
  obs[index(state_.agent)] = 1;
  obs[plane + index(state_.predator)] = 1;
  std::copy(state_.food.begin(), state_.food.end(), obs.begin() + static_cast<std::ptrdiff_t>(2 * plane));
  return obs;
}

} // namespace curriculum
