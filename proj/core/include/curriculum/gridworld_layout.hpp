#pragma once

#include "curriculum/env_types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace curriculum {

enum class CellKind { plain, pit, fire, fire_adjacent, treasure };

/// Immutable maze description.
///
/// Text format, one character per cell:
///   `.` plain, `P` pit, `F` fire, `T` treasure, `S` designated start.
/// Lines starting with `#` and blank lines are ignored. Fire-adjacent cells
/// are derived on load (plain 4-neighbours of a fire).
///
/// Shortest-path distances to the treasure are precomputed by BFS over
/// every non-pit cell; `max_distance()` is the distance of the designated
/// start.
class GridWorldLayout {
public:
  static GridWorldLayout parse(std::string_view text);
  static GridWorldLayout load(const std::filesystem::path& path);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Cell start() const noexcept { return start_; }
  Cell treasure() const noexcept { return treasure_; }

  bool in_bounds(Cell cell) const noexcept {
    return cell.row >= 0 && cell.row < height_ && cell.col >= 0 && cell.col < width_;
  }
  CellKind kind(Cell cell) const { return cells_.at(index(cell)); }

  /// BFS distance to the treasure, -1 when unreachable.
  int distance(Cell cell) const { return distances_.at(index(cell)); }
  int max_distance() const noexcept { return distance(start_); }

  /// Plain cells at exactly `d` steps from the treasure, in row-major order.
  const std::vector<Cell>& eligible_at(int d) const;

  std::size_t index(Cell cell) const noexcept {
    return static_cast<std::size_t>(cell.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(cell.col);
  }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  /// Renders back to the text format (fire-adjacent cells print as `.`).
  std::string to_string() const;

private:
  GridWorldLayout() = default;
  void compute_distances();

  int width_ = 0;
  int height_ = 0;
  Cell start_;
  Cell treasure_;
  std::vector<CellKind> cells_;
  std::vector<int> distances_;
  std::vector<std::vector<Cell>> eligible_by_distance_;
};

} // namespace curriculum
