#pragma once

// Grid-map model shared by every layer. Cells are addressed as (col, row),
// zero-indexed, with col increasing east and row increasing north.

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coverpath/error.hpp"

namespace coverpath {

struct CellCoord {
  int col = 0;
  int row = 0;

  friend constexpr auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

std::string to_string(CellCoord c);

struct CellCoordHash {
  std::size_t operator()(const CellCoord& c) const noexcept {
    return std::hash<long long>()((static_cast<long long>(c.col) << 32) ^ static_cast<unsigned>(c.row));
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Bounded cell grid with a static obstacle set. Immutable once built; the
/// constructor enforces bounds, at least one free cell, and a single
/// 4-connected free component.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<CellCoord> obstacles = {}, double cell_size = 1.0);

  static GridMap rectangle(int width, int height, double cell_size = 1.0) {
    return GridMap(width, height, {}, cell_size);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double cell_size() const noexcept { return cell_size_; }

  bool in_bounds(CellCoord c) const noexcept {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  /// In bounds and not an obstacle.
  bool is_free(CellCoord c) const noexcept { return in_bounds(c) && !blocked_[index(c)]; }
  bool is_obstacle(CellCoord c) const noexcept { return in_bounds(c) && blocked_[index(c)]; }
  bool has_obstacles() const noexcept { return !obstacles_.empty(); }

  /// Sorted by (col, row).
  const std::vector<CellCoord>& obstacles() const noexcept { return obstacles_; }
  /// Free cells in row-major order (row 0 first, then by column).
  const std::vector<CellCoord>& free_cells() const noexcept { return free_cells_; }
  std::size_t free_count() const noexcept { return free_cells_.size(); }

  std::size_t index(CellCoord c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
  }
  CellCoord coord(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }
  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  /// Map extent in meters.
  double extent_x() const noexcept { return width_ * cell_size_; }
  double extent_y() const noexcept { return height_ * cell_size_; }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cell_size_ == b.cell_size_ &&
           a.obstacles_ == b.obstacles_;
  }

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<CellCoord> obstacles_;
  std::vector<bool> blocked_;
  std::vector<CellCoord> free_cells_;
};

/// Ordered waypoint cells proposed by a planner. Valid on a map when every
/// cell is free and consecutive cells differ; consecutive cells need not be
/// adjacent (evaluation bridges gaps with bfs_path).
struct WaypointPath {
  std::vector<CellCoord> cells;

  bool empty() const noexcept { return cells.empty(); }
  std::size_t size() const noexcept { return cells.size(); }
  const CellCoord& front() const { return cells.front(); }
  const CellCoord& back() const { return cells.back(); }

  friend bool operator==(const WaypointPath&, const WaypointPath&) = default;
};

/// Throws InvalidPath naming the first violation.
void validate_path(const GridMap& map, const WaypointPath& path);

/// Parses the text map format: optional "cellsize <float>" header, then one
/// line per row with the northmost row first; '.' free, '#' obstacle.
GridMap parse_map(std::string_view text);
GridMap load_map_file(const std::string& path);

/// Canonical text form; parse_map(serialize_map(m)) == m and canonical files
/// round-trip byte for byte. The header is emitted only when cell_size != 1.
std::string serialize_map(const GridMap& map);

/// Free 4-neighbors in E, N, W, S order. Throws OutOfBounds.
std::vector<CellCoord> neighbors4(const GridMap& map, CellCoord c);

/// Center of a cell in meters. Throws OutOfBounds.
Point2 cell_center(const GridMap& map, CellCoord c);

/// Cell containing a metric point, or nullopt outside the map.
std::optional<CellCoord> cell_at(const GridMap& map, Point2 p);

bool are_adjacent(CellCoord a, CellCoord b) noexcept;
int manhattan(CellCoord a, CellCoord b) noexcept;

/// Breadth-first shortest path over free cells, inclusive of both ends.
/// Expansion uses the neighbors4 order and keeps the first parent found, so
/// the result is deterministic. Empty when unreachable.
std::vector<CellCoord> bfs_path(const GridMap& map, CellCoord from, CellCoord to);

}  // namespace coverpath
