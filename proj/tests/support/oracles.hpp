#pragma once

// Independent reference implementations used to cross-check the library.
// They share no code with coverpath beyond the GridMap container.

#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "coverpath/grid.hpp"

namespace coverpath::testing {

/// Exact minimum number of unit steps of a walk from `start` that visits
/// every free cell, by breadth-first search over (cell, visited-set) states.
/// Only for maps with at most 20 free cells.
inline int brute_force_coverage_steps(const GridMap& map, CellCoord start) {
  const std::vector<CellCoord>& free = map.free_cells();
  const int n = static_cast<int>(free.size());
  auto id_of = [&](CellCoord c) {
    for (int i = 0; i < n; ++i) {
      if (free[i] == c) return i;
    }
    return -1;
  };
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    const int dc[4] = {1, 0, -1, 0};
    const int dr[4] = {0, 1, 0, -1};
    for (int k = 0; k < 4; ++k) {
      const int j = id_of({free[i].col + dc[k], free[i].row + dr[k]});
      if (j >= 0) adj[i].push_back(j);
    }
  }
  const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  const int s = id_of(start);
  std::vector<int> dist(static_cast<std::size_t>(n) << n, -1);
  auto key = [n](int cell, std::uint32_t mask) { return (static_cast<std::size_t>(mask) * n) + cell; };
  std::deque<std::pair<int, std::uint32_t>> queue;
  dist[key(s, 1u << s)] = 0;
  queue.push_back({s, 1u << s});
  while (!queue.empty()) {
    const auto [cell, mask] = queue.front();
    queue.pop_front();
    const int d = dist[key(cell, mask)];
    if (mask == full) return d;
    for (int nb : adj[cell]) {
      const std::uint32_t m2 = mask | (1u << nb);
      if (dist[key(nb, m2)] < 0) {
        dist[key(nb, m2)] = d + 1;
        queue.push_back({nb, m2});
      }
    }
  }
  return -1;
}

/// Every connected map with width, height <= 3 and at most two obstacles.
inline std::vector<GridMap> all_small_maps() {
  std::vector<GridMap> out;
  for (int w = 1; w <= 3; ++w) {
    for (int h = 1; h <= 3; ++h) {
      const int cells = w * h;
      for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        if (std::popcount(mask) > 2) continue;
        std::vector<CellCoord> obstacles;
        for (int i = 0; i < cells; ++i) {
          if (mask & (1u << i)) obstacles.push_back({i % w, i / w});
        }
        try {
          out.emplace_back(w, h, obstacles);
        } catch (const Error&) {
          // disconnected or no free cell
        }
      }
    }
  }
  return out;
}

/// Direction changes along a unit-step cell sequence, counted step by step.
inline int reference_turns(const std::vector<CellCoord>& steps) {
  int turns = 0;
  int prev_dc = 0;
  int prev_dr = 0;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const int dc = steps[i].col - steps[i - 1].col;
    const int dr = steps[i].row - steps[i - 1].row;
    if (i >= 2 && (dc != prev_dc || dr != prev_dr)) ++turns;
    prev_dc = dc;
    prev_dr = dr;
  }
  return turns;
}

/// Shortest 4-connected distance in steps, or -1.
inline int reference_distance(const GridMap& map, CellCoord a, CellCoord b) {
  std::vector<int> dist(static_cast<std::size_t>(map.width() * map.height()), -1);
  auto at = [&](CellCoord c) -> int& { return dist[static_cast<std::size_t>(c.row * map.width() + c.col)]; };
  std::deque<CellCoord> queue{a};
  at(a) = 0;
  while (!queue.empty()) {
    const CellCoord c = queue.front();
    queue.pop_front();
    if (c == b) return at(c);
    const CellCoord next[4] = {{c.col + 1, c.row}, {c.col, c.row + 1}, {c.col - 1, c.row}, {c.col, c.row - 1}};
    for (const CellCoord& n : next) {
      if (map.is_free(n) && at(n) < 0) {
        at(n) = at(c) + 1;
        queue.push_back(n);
      }
    }
  }
  return -1;
}

/// Length in meters of a waypoint path whose gaps are bridged by shortest paths.
inline double reference_length(const GridMap& map, const WaypointPath& path) {
  long steps = 0;
  for (std::size_t i = 1; i < path.size(); ++i) steps += reference_distance(map, path.cells[i - 1], path.cells[i]);
  return static_cast<double>(steps) * map.cell_size();
}

}  // namespace coverpath::testing
