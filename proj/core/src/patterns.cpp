#include "coverpath/patterns.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "coverpath/metrics.hpp"

namespace coverpath {

namespace {

struct Orientation {
  bool flip_col = false;
  bool flip_row = false;
};

void require_rectangle(const GridMap& map, std::string_view pattern) {
  if (map.has_obstacles()) {
    throw Error(ErrorCode::UnsupportedMap,
                std::string(pattern) + " requires an obstacle-free map; found " +
                    std::to_string(map.obstacles().size()) + " obstacles");
  }
}

Orientation corner_orientation(const GridMap& map, CellCoord corner) {
  const bool west = corner.col == 0;
  const bool east = corner.col == map.width() - 1;
  const bool south = corner.row == 0;
  const bool north = corner.row == map.height() - 1;
  if (!map.in_bounds(corner) || !(west || east) || !(south || north)) {
    throw Error(ErrorCode::NotACorner, to_string(corner) + " is not a corner of the " +
                                           std::to_string(map.width()) + "x" + std::to_string(map.height()) +
                                           " map");
  }
  return {!west, !south};
}

// Generators below work in the canonical frame (start at 0,0); this maps the
// result onto the requested corner.
WaypointPath orient(const GridMap& map, Orientation o, std::vector<CellCoord> cells) {
  for (CellCoord& c : cells) {
    if (o.flip_col) c.col = map.width() - 1 - c.col;
    if (o.flip_row) c.row = map.height() - 1 - c.row;
  }
  return WaypointPath{std::move(cells)};
}

void append_lawnmower(std::vector<CellCoord>& out, int col0, int row0, int width, int height) {
  for (int i = 0; i < width; ++i) {
    const int col = col0 + i;
    if (i % 2 == 0) {
      for (int r = 0; r < height; ++r) out.push_back({col, row0 + r});
    } else {
      for (int r = height - 1; r >= 0; --r) out.push_back({col, row0 + r});
    }
  }
}

// Closed loop around the ring with corners (left,bottom)-(right,top),
// counter-clockwise from (left,bottom) and back to it. Degenerate rings
// (a single row or column) are driven out and back.
void append_ring_loop(std::vector<CellCoord>& out, int left, int bottom, int right, int top) {
  if (left == right && bottom == top) {
    out.push_back({left, bottom});
    return;
  }
  if (left == right || bottom == top) {
    std::vector<CellCoord> strip;
    for (int c = left; c <= right; ++c) {
      for (int r = bottom; r <= top; ++r) strip.push_back({c, r});
    }
    out.insert(out.end(), strip.begin(), strip.end());
    out.insert(out.end(), strip.rbegin() + 1, strip.rend());
    return;
  }
  for (int c = left; c <= right; ++c) out.push_back({c, bottom});
  for (int r = bottom + 1; r <= top; ++r) out.push_back({right, r});
  for (int c = right - 1; c >= left; --c) out.push_back({c, top});
  for (int r = top - 1; r >= bottom; --r) out.push_back({left, r});
}

constexpr std::array<CellCoord, 4> kDirs = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

int direction_of(CellCoord from, CellCoord to) {
  const CellCoord d{to.col - from.col, to.row - from.row};
  for (int i = 0; i < 4; ++i) {
    if (kDirs[static_cast<std::size_t>(i)] == d) return i;
  }
  return -1;
}

// Depth-first search for a unit-step walk that enters only unvisited cells
// (a Hamiltonian completion), optionally spending a small budget of repeat
// visits. Pruning: color parity, forced endpoints, connectivity, turn cap.
class WalkSearch {
 public:
  enum class Ordering { Warnsdorff, StraightFirst };

  WalkSearch(const GridMap& map, int max_turns, std::size_t node_limit, Ordering ordering)
      : map_(map), max_turns_(max_turns), node_limit_(node_limit), ordering_(ordering) {}

  /// Continues `prefix` until every free cell is visited. Cells in the prefix
  /// count as visited; `repeats` extra moves into visited cells are allowed.
  std::optional<std::vector<CellCoord>> complete(std::vector<CellCoord> prefix, int repeats) {
    visited_.assign(map_.cell_count(), false);
    unvisited_by_color_ = {0, 0};
    for (const CellCoord& c : map_.free_cells()) ++unvisited_by_color_[color(c)];
    unvisited_ = map_.free_count();
    for (const CellCoord& c : prefix) mark(c);
    path_ = std::move(prefix);
    int turns = 0;
    int last_dir = -1;
    for (std::size_t i = 1; i < path_.size(); ++i) {
      int d = direction_of(path_[i - 1], path_[i]);
      if (last_dir >= 0 && d != last_dir) ++turns;
      last_dir = d;
    }
    nodes_ = 0;
    aborted_ = false;
    if (dfs(last_dir, turns, repeats)) return path_;
    return std::nullopt;
  }

 private:
  static std::size_t color(CellCoord c) { return static_cast<std::size_t>((c.col + c.row) & 1); }

  bool is_unvisited(CellCoord c) const { return map_.is_free(c) && !visited_[map_.index(c)]; }

  void mark(CellCoord c) {
    if (!visited_[map_.index(c)]) {
      visited_[map_.index(c)] = true;
      --unvisited_;
      --unvisited_by_color_[color(c)];
    }
  }
  void unmark(CellCoord c) {
    visited_[map_.index(c)] = false;
    ++unvisited_;
    ++unvisited_by_color_[color(c)];
  }

  int unvisited_degree(CellCoord c) const {
    int d = 0;
    for (const CellCoord& s : kDirs) d += is_unvisited({c.col + s.col, c.row + s.row}) ? 1 : 0;
    return d;
  }

  // Feasibility of covering the remaining cells by a simple path from `cur`.
  bool hamiltonian_feasible(CellCoord cur) const {
    if (unvisited_ == 0) return true;
    // Path cur, u1, ..., um alternates colors.
    const std::size_t m = unvisited_;
    const std::size_t opposite = 1 - color(cur);
    if (unvisited_by_color_[opposite] != (m + 1) / 2 || unvisited_by_color_[1 - opposite] != m / 2) return false;

    int endpoints = 0;
    for (const CellCoord& u : map_.free_cells()) {
      if (visited_[map_.index(u)]) continue;
      const int links = unvisited_degree(u) + (are_adjacent(u, cur) ? 1 : 0);
      if (links == 0) return false;
      if (links == 1 && ++endpoints > 1) return false;
    }

    std::vector<bool> seen(map_.cell_count(), false);
    std::deque<CellCoord> queue{cur};
    seen[map_.index(cur)] = true;
    std::size_t reached = 0;
    while (!queue.empty()) {
      CellCoord c = queue.front();
      queue.pop_front();
      for (const CellCoord& s : kDirs) {
        CellCoord n{c.col + s.col, c.row + s.row};
        if (is_unvisited(n) && !seen[map_.index(n)]) {
          seen[map_.index(n)] = true;
          ++reached;
          queue.push_back(n);
        }
      }
    }
    return reached == unvisited_;
  }

  bool dfs(int last_dir, int turns, int repeats) {
    if (unvisited_ == 0) return true;
    if (aborted_ || ++nodes_ > node_limit_) {
      aborted_ = true;
      return false;
    }
    const CellCoord cur = path_.back();

    struct Candidate {
      CellCoord cell;
      int dir;
      bool fresh;
      int degree;
    };
    std::vector<Candidate> candidates;
    for (int d = 0; d < 4; ++d) {
      const CellCoord& s = kDirs[static_cast<std::size_t>(d)];
      CellCoord n{cur.col + s.col, cur.row + s.row};
      if (!map_.is_free(n)) continue;
      const bool fresh = !visited_[map_.index(n)];
      if (!fresh && repeats == 0) continue;
      candidates.push_back({n, d, fresh, unvisited_degree(n)});
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.fresh != b.fresh) return a.fresh;
      const int sa = a.dir == last_dir ? 0 : 1;
      const int sb = b.dir == last_dir ? 0 : 1;
      if (ordering_ == Ordering::StraightFirst && sa != sb) return sa < sb;
      if (a.degree != b.degree) return a.degree < b.degree;
      return sa < sb;
    });

    for (const Candidate& c : candidates) {
      const int next_turns = turns + ((last_dir >= 0 && c.dir != last_dir) ? 1 : 0);
      if (next_turns > max_turns_) continue;
      const int next_repeats = repeats - (c.fresh ? 0 : 1);
      path_.push_back(c.cell);
      if (c.fresh) mark(c.cell);
      const bool viable = next_repeats > 0 || hamiltonian_feasible(c.cell);
      if (viable && dfs(c.dir, next_turns, next_repeats)) return true;
      if (c.fresh) unmark(c.cell);
      path_.pop_back();
      if (aborted_) return false;
    }
    return false;
  }

  const GridMap& map_;
  int max_turns_;
  std::size_t node_limit_;
  Ordering ordering_;
  std::vector<bool> visited_;
  std::array<std::size_t, 2> unvisited_by_color_{};
  std::size_t unvisited_ = 0;
  std::vector<CellCoord> path_;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

std::vector<CellCoord> greedy_walk(const GridMap& map, CellCoord start) {
  std::vector<bool> visited(map.cell_count(), false);
  std::vector<CellCoord> out{start};
  visited[map.index(start)] = true;
  std::size_t remaining = map.free_count() - 1;
  while (remaining > 0) {
    // Nearest unvisited cell in BFS order (E, N, W, S expansion).
    const CellCoord cur = out.back();
    std::vector<bool> seen(map.cell_count(), false);
    std::deque<CellCoord> queue{cur};
    seen[map.index(cur)] = true;
    CellCoord target = cur;
    while (!queue.empty()) {
      CellCoord c = queue.front();
      queue.pop_front();
      if (!visited[map.index(c)]) {
        target = c;
        break;
      }
      for (const CellCoord& n : neighbors4(map, c)) {
        if (!seen[map.index(n)]) {
          seen[map.index(n)] = true;
          queue.push_back(n);
        }
      }
    }
    std::vector<CellCoord> leg = bfs_path(map, cur, target);
    for (std::size_t i = 1; i < leg.size(); ++i) {
      out.push_back(leg[i]);
      if (!visited[map.index(leg[i])]) {
        visited[map.index(leg[i])] = true;
        --remaining;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::Lawnmower: return "lawnmower";
    case Pattern::SquareSpiral: return "spiral";
    case Pattern::SquareMove: return "square";
    case Pattern::WallfollowLawnmower: return "wallmow";
    case Pattern::CoverageWalk: return "walk";
  }
  return "unknown";
}

std::optional<Pattern> parse_pattern(std::string_view name) {
  if (name == "lawnmower") return Pattern::Lawnmower;
  if (name == "spiral" || name == "square_spiral") return Pattern::SquareSpiral;
  if (name == "square" || name == "square_move") return Pattern::SquareMove;
  if (name == "wallmow" || name == "wallfollow_then_lawnmower") return Pattern::WallfollowLawnmower;
  if (name == "walk" || name == "coverage_walk") return Pattern::CoverageWalk;
  return std::nullopt;
}

WaypointPath lawnmower(const GridMap& map, CellCoord start_corner) {
  require_rectangle(map, "lawnmower");
  const Orientation o = corner_orientation(map, start_corner);
  std::vector<CellCoord> cells;
  cells.reserve(map.cell_count());
  append_lawnmower(cells, 0, 0, map.width(), map.height());
  return orient(map, o, std::move(cells));
}

WaypointPath square_spiral(const GridMap& map, CellCoord start_corner) {
  require_rectangle(map, "square_spiral");
  const Orientation o = corner_orientation(map, start_corner);
  std::vector<CellCoord> cells;
  cells.reserve(map.cell_count());
  int left = 0, bottom = 0, right = map.width() - 1, top = map.height() - 1;
  while (left <= right && bottom <= top) {
    for (int c = left; c <= right; ++c) cells.push_back({c, bottom});
    for (int r = bottom + 1; r <= top; ++r) cells.push_back({right, r});
    if (bottom < top) {
      for (int c = right - 1; c >= left; --c) cells.push_back({c, top});
    }
    if (left < right) {
      for (int r = top - 1; r > bottom; --r) cells.push_back({left, r});
    }
    ++left;
    ++bottom;
    --right;
    --top;
  }
  return orient(map, o, std::move(cells));
}

WaypointPath square_move(const GridMap& map, CellCoord start_corner) {
  require_rectangle(map, "square_move");
  const Orientation o = corner_orientation(map, start_corner);
  std::vector<CellCoord> cells;
  int left = 0, bottom = 0, right = map.width() - 1, top = map.height() - 1;
  while (true) {
    append_ring_loop(cells, left, bottom, right, top);
    if (left + 1 > right - 1 || bottom + 1 > top - 1) break;
    // Inward: one step along the bottom edge, one step north.
    cells.push_back({left + 1, bottom});
    ++left;
    ++bottom;
    --right;
    --top;
  }
  return orient(map, o, std::move(cells));
}

WaypointPath wallfollow_then_lawnmower(const GridMap& map, CellCoord start_corner) {
  require_rectangle(map, "wallfollow_then_lawnmower");
  if (map.width() < 3 || map.height() < 3) {
    throw Error(ErrorCode::MapTooSmall, "wall following needs an interior; map is " + std::to_string(map.width()) +
                                            "x" + std::to_string(map.height()));
  }
  const Orientation o = corner_orientation(map, start_corner);
  std::vector<CellCoord> cells;
  cells.reserve(map.cell_count() + 3);
  append_ring_loop(cells, 0, 0, map.width() - 1, map.height() - 1);
  cells.push_back({1, 0});
  append_lawnmower(cells, 1, 1, map.width() - 2, map.height() - 2);
  return orient(map, o, std::move(cells));
}

WaypointPath coverage_walk(const GridMap& map, CellCoord start) {
  const double bound = shortest_coverage_length(map, start) / map.cell_size();
  if (map.free_count() == 1) return WaypointPath{{start}};
  const int budget = static_cast<int>(bound + 0.5) - static_cast<int>(map.free_count() - 1);
  const int max_turns = 2 * (map.width() + map.height());
  // Straight-first walks have fewer turns but can stall the search; the
  // Warnsdorff ordering finds a walk quickly when they do.
  struct Attempt {
    WalkSearch::Ordering ordering;
    std::size_t node_limit;
  };
  constexpr Attempt kAttempts[] = {{WalkSearch::Ordering::StraightFirst, 5000},
                                   {WalkSearch::Ordering::Warnsdorff, 200000}};

  for (const Attempt& attempt : kAttempts) {
    WalkSearch search(map, max_turns, attempt.node_limit, attempt.ordering);
    if (budget == 0) {
      if (auto walk = search.complete({start}, 0)) return WaypointPath{std::move(*walk)};
    } else if (budget == 1) {
      // Step out to a neighbor and back, then finish without repeats.
      for (const CellCoord& n : neighbors4(map, start)) {
        if (auto walk = search.complete({start, n, start}, 0)) return WaypointPath{std::move(*walk)};
      }
    }
    if (budget >= 1) {
      if (auto walk = search.complete({start}, budget)) return WaypointPath{std::move(*walk)};
    }
  }
  // The parity bound is not always reachable (a start inside a corridor must
  // walk back over it); allow a few more repeats before going greedy.
  WalkSearch search(map, max_turns, 200000, WalkSearch::Ordering::Warnsdorff);
  for (int extra = 1; extra <= 4; ++extra) {
    if (auto walk = search.complete({start}, budget + extra)) return WaypointPath{std::move(*walk)};
  }
  return WaypointPath{greedy_walk(map, start)};
}

WaypointPath generate(Pattern pattern, const GridMap& map, CellCoord start) {
  switch (pattern) {
    case Pattern::Lawnmower: return lawnmower(map, start);
    case Pattern::SquareSpiral: return square_spiral(map, start);
    case Pattern::SquareMove: return square_move(map, start);
    case Pattern::WallfollowLawnmower: return wallfollow_then_lawnmower(map, start);
    case Pattern::CoverageWalk: return coverage_walk(map, start);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown pattern");
}

}  // namespace coverpath
