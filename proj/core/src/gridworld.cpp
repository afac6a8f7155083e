#include "curriculum/gridworld.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curriculum {

std::string_view to_string(DoneReason reason) noexcept {
  switch (reason) {
  case DoneReason::treasure:
    return "treasure";
  case DoneReason::pit:
    return "pit";
  case DoneReason::step_limit:
    return "step_limit";
  case DoneReason::health_depleted:
    return "health_depleted";
  case DoneReason::time_limit:
    return "time_limit";
  }
  return "unknown";
}

GridWorldLayout GridWorldLayout::parse(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(line);
  }
  if (rows.empty()) {
    throw std::invalid_argument("grid layout is empty");
  }

  GridWorldLayout layout;
  layout.height_ = static_cast<int>(rows.size());
  layout.width_ = static_cast<int>(rows.front().size());
  layout.cells_.assign(static_cast<std::size_t>(layout.width_ * layout.height_), CellKind::plain);

  int treasures = 0;
  int starts = 0;
  for (int r = 0; r < layout.height_; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != layout.width_) {
      throw std::invalid_argument("grid layout row " + std::to_string(r) + " has width " +
                                  std::to_string(row.size()) + ", expected " +
                                  std::to_string(layout.width_));
    }
    for (int c = 0; c < layout.width_; ++c) {
      auto& kind = layout.cells_[layout.index({r, c})];
      switch (row[static_cast<std::size_t>(c)]) {
      case '.':
        kind = CellKind::plain;
        break;
      case 'P':
        kind = CellKind::pit;
        break;
      case 'F':
        kind = CellKind::fire;
        break;
      case 'T':
        kind = CellKind::treasure;
        layout.treasure_ = {r, c};
        ++treasures;
        break;
      case 'S':
        kind = CellKind::plain;
        layout.start_ = {r, c};
        ++starts;
        break;
      default:
        throw std::invalid_argument(std::string("grid layout has unknown cell character '") +
                                    row[static_cast<std::size_t>(c)] + "'");
      }
    }
  }
  if (treasures != 1) {
    throw std::invalid_argument("grid layout needs exactly one treasure, found " +
                                std::to_string(treasures));
  }
  if (starts != 1) {
    throw std::invalid_argument("grid layout needs exactly one start, found " +
                                std::to_string(starts));
  }

  for (int r = 0; r < layout.height_; ++r) {
    for (int c = 0; c < layout.width_; ++c) {
      if (layout.kind({r, c}) != CellKind::fire) continue;
      for (Action a : kAllActions) {
        const Cell n = moved({r, c}, a);
        if (layout.in_bounds(n) && layout.kind(n) == CellKind::plain) {
          layout.cells_[layout.index(n)] = CellKind::fire_adjacent;
        }
      }
    }
  }
  if (layout.kind(layout.start_) != CellKind::plain) {
    throw std::invalid_argument("designated start must not touch a fire");
  }

  layout.compute_distances();
  if (layout.max_distance() < 1) {
    throw std::invalid_argument("designated start cannot reach the treasure");
  }
  return layout;
}

GridWorldLayout GridWorldLayout::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open grid layout '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void GridWorldLayout::compute_distances() {
  distances_.assign(cells_.size(), -1);
  std::deque<Cell> queue{treasure_};
  distances_[index(treasure_)] = 0;
  while (!queue.empty()) {
    const Cell cell = queue.front();
    queue.pop_front();
    for (Action a : kAllActions) {
      const Cell n = moved(cell, a);
      if (!in_bounds(n) || kind(n) == CellKind::pit || distances_[index(n)] >= 0) continue;
      distances_[index(n)] = distances_[index(cell)] + 1;
      queue.push_back(n);
    }
  }

  int max_seen = 0;
  for (int d : distances_) max_seen = std::max(max_seen, d);
  eligible_by_distance_.assign(static_cast<std::size_t>(max_seen) + 1, {});
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const int d = distances_[index({r, c})];
      if (d >= 1 && kind({r, c}) == CellKind::plain) {
        eligible_by_distance_[static_cast<std::size_t>(d)].push_back({r, c});
      }
    }
  }
}

const std::vector<Cell>& GridWorldLayout::eligible_at(int d) const {
  static const std::vector<Cell> kNone;
  if (d < 0 || d >= static_cast<int>(eligible_by_distance_.size())) return kNone;
  return eligible_by_distance_[static_cast<std::size_t>(d)];
}

std::string GridWorldLayout::to_string() const {
  std::string out;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const Cell cell{r, c};
      char ch = '.';
      switch (kind(cell)) {
      case CellKind::pit:
        ch = 'P';
        break;
      case CellKind::fire:
        ch = 'F';
        break;
      case CellKind::treasure:
        ch = 'T';
        break;
      default:
        ch = cell == start_ ? 'S' : '.';
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

double gridworld_entry_reward(const GridWorldLayout& layout, Cell cell) {
  switch (layout.kind(cell)) {
  case CellKind::treasure:
    return gridworld::kTreasureReward;
  case CellKind::pit:
    return gridworld::kPitReward;
  case CellKind::fire:
    return gridworld::kFireReward;
  case CellKind::fire_adjacent:
    return gridworld::kFireAdjacentReward;
  case CellKind::plain:
    break;
  }
  return gridworld::kStepReward;
}

GridWorld::GridWorld(std::shared_ptr<const GridWorldLayout> layout, int max_actions)
    : layout_(std::move(layout)), max_actions_(max_actions) {
  if (!layout_) {
    throw std::invalid_argument("grid world needs a layout");
  }
  if (max_actions_ < 1) {
    throw std::invalid_argument("grid world action budget must be >= 1");
  }
}

const GridWorldState& GridWorld::reset(const TaskParameters& task, std::mt19937_64& rng) {
  const double d = task.at(gridworld::kStartDistanceParam);
  return reset_at(gridworld_start_for_distance(*layout_, d, rng));
}

const GridWorldState& GridWorld::reset_at(Cell start) {
  if (!layout_->in_bounds(start)) {
    throw std::invalid_argument("start cell outside the grid");
  }
  state_ = GridWorldState{start, 0};
  done_ = false;
  return state_;
}

Transition<GridWorldState> GridWorld::step(Action action) {
  if (done_) {
    throw std::logic_error("grid world stepped after the episode finished");
  }
  Transition<GridWorldState> t;
  const Cell target = moved(state_.agent, action);
  if (layout_->in_bounds(target)) {
    state_.agent = target;
    t.reward = gridworld_entry_reward(*layout_, target);
    const CellKind kind = layout_->kind(target);
    if (kind == CellKind::treasure) {
      t.done_reason = DoneReason::treasure;
    } else if (kind == CellKind::pit) {
      t.done_reason = DoneReason::pit;
    }
  } else {
    t.reward = gridworld::kStepReward;
  }
  ++state_.steps_taken;
  if (!t.done_reason && state_.steps_taken >= max_actions_) {
    t.done_reason = DoneReason::step_limit;
  }
  t.done = t.done_reason.has_value();
  done_ = t.done;
  t.next_state = state_;
  return t;
}

double min_successful_return(const GridWorldLayout& layout, int max_actions) {
  // reachable[i]: plain cell i can be occupied after exactly k actions.
  std::vector<char> reachable(layout.cell_count(), 0);
  reachable[layout.index(layout.start())] = 1;
  int longest = -1;
  for (int k = 1; k <= max_actions; ++k) {
    std::vector<char> next(layout.cell_count(), 0);
    bool hits_treasure = false;
    for (int r = 0; r < layout.height(); ++r) {
      for (int c = 0; c < layout.width(); ++c) {
        const Cell cell{r, c};
        if (!reachable[layout.index(cell)]) continue;
        for (Action a : kAllActions) {
          const Cell n = moved(cell, a);
          if (!layout.in_bounds(n)) {
            next[layout.index(cell)] = 1;
          } else if (layout.kind(n) == CellKind::treasure) {
            hits_treasure = true;
          } else if (layout.kind(n) == CellKind::plain) {
            next[layout.index(n)] = 1;
          }
        }
      }
    }
    if (hits_treasure) longest = k;
    reachable = std::move(next);
  }
  if (longest < 0) {
    throw std::runtime_error("treasure unreachable from the start within the action budget");
  }
  return gridworld::kTreasureReward + gridworld::kStepReward * (longest - 1);
}

} // namespace curriculum
