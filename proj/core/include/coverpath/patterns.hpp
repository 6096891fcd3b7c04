#pragma once

// Deterministic coverage patterns. The four classic sweeps require an
// obstacle-free rectangle and a corner start; coverage_walk works from any
// free cell on any map.

#include <optional>
#include <string_view>

#include "coverpath/grid.hpp"

namespace coverpath {

enum class Pattern {
  Lawnmower,
  SquareSpiral,
  SquareMove,
  WallfollowLawnmower,
  CoverageWalk,
};

std::string_view to_string(Pattern p);
/// Accepts "lawnmower", "spiral", "square", "wallmow", "walk" (and the to_string names).
std::optional<Pattern> parse_pattern(std::string_view name);

/// Boustrophedon sweep along columns: north-south runs, shifting one column
/// away from the start corner after each run.
WaypointPath lawnmower(const GridMap& map, CellCoord start_corner);

/// Perimeter first, spiralling continuously inward; every cell exactly once.
WaypointPath square_spiral(const GridMap& map, CellCoord start_corner);

/// Each concentric ring is driven as a closed loop back to its entry cell,
/// then the path steps one cell inward (two unit moves) to the next ring.
WaypointPath square_move(const GridMap& map, CellCoord start_corner);

/// Closed perimeter loop, transition into the interior block, then a
/// lawnmower over the (width-2) x (height-2) interior. Needs width, height >= 3.
WaypointPath wallfollow_then_lawnmower(const GridMap& map, CellCoord start_corner);

/// Unit-step walk from `start` covering every free cell. Searches for a walk
/// whose length meets shortest_coverage_length, keeping turns within
/// 2 * (width + height); falls back to nearest-unvisited greedy routing when
/// the search budget runs out.
WaypointPath coverage_walk(const GridMap& map, CellCoord start);

WaypointPath generate(Pattern pattern, const GridMap& map, CellCoord start);

}  // namespace coverpath
