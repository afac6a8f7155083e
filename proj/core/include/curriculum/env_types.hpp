#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace curriculum {

enum class Action : int { north = 0, east = 1, south = 2, west = 3 };

inline constexpr int kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kAllActions{Action::north, Action::east,
                                                              Action::south, Action::west};

struct Cell {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;
};

/// Neighbour of `cell` in direction `action`, without bounds checking.
constexpr Cell moved(Cell cell, Action action) noexcept {
  switch (action) {
  case Action::north:
    return {cell.row - 1, cell.col};
  case Action::east:
    return {cell.row, cell.col + 1};
  case Action::south:
    return {cell.row + 1, cell.col};
  case Action::west:
    return {cell.row, cell.col - 1};
  }
  return cell;
}

enum class DoneReason { treasure, pit, step_limit, health_depleted, time_limit };

std::string_view to_string(DoneReason reason) noexcept;

template <class State>
struct Transition {
  State next_state;
  double reward = 0.0;
  bool done = false;
  std::optional<DoneReason> done_reason; // set iff done
};

} // namespace curriculum
