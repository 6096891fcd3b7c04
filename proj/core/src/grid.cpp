#include "coverpath/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>

namespace coverpath {

namespace {

constexpr CellCoord kSteps[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // E, N, W, S

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void require_in_bounds(const GridMap& map, CellCoord c) {
  if (!map.in_bounds(c)) {
    throw Error(ErrorCode::OutOfBounds, "cell " + to_string(c) + " outside " + std::to_string(map.width()) +
                                            "x" + std::to_string(map.height()) + " map");
  }
}

}  // namespace

std::string to_string(CellCoord c) { return std::to_string(c.col) + "," + std::to_string(c.row); }

GridMap::GridMap(int width, int height, std::vector<CellCoord> obstacles, double cell_size)
    : width_(width), height_(height), cell_size_(cell_size), obstacles_(std::move(obstacles)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::EmptyMap, "map dimensions must be at least 1x1");
  }
  if (!std::isfinite(cell_size) || cell_size <= 0.0) {
    throw Error(ErrorCode::MalformedMap, "cell size must be a positive finite length");
  }
  blocked_.assign(cell_count(), false);
  for (const CellCoord& c : obstacles_) {
    if (!in_bounds(c)) {
      throw Error(ErrorCode::OutOfBounds, "obstacle " + to_string(c) + " outside map");
    }
    blocked_[index(c)] = true;
  }
  std::sort(obstacles_.begin(), obstacles_.end());
  obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());

  for (std::size_t i = 0; i < cell_count(); ++i) {
    if (!blocked_[i]) free_cells_.push_back(coord(i));
  }
  if (free_cells_.empty()) {
    throw Error(ErrorCode::EmptyMap, "map has no free cells");
  }

  // Flood fill from the first free cell; every free cell must be reached.
  std::vector<bool> seen(cell_count(), false);
  std::deque<CellCoord> queue{free_cells_.front()};
  seen[index(free_cells_.front())] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    CellCoord c = queue.front();
    queue.pop_front();
    for (const CellCoord& d : kSteps) {
      CellCoord n{c.col + d.col, c.row + d.row};
      if (is_free(n) && !seen[index(n)]) {
        seen[index(n)] = true;
        ++reached;
        queue.push_back(n);
      }
    }
  }
  if (reached != free_cells_.size()) {
    throw Error(ErrorCode::DisconnectedFreeSpace,
                std::to_string(free_cells_.size() - reached) + " free cells unreachable from " +
                    to_string(free_cells_.front()));
  }
}

GridMap parse_map(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  double cell_size = 1.0;
  std::size_t first = 0;
  if (!lines.empty() && lines.front().starts_with("cellsize")) {
    std::string_view value = trim(lines.front().substr(8));
    double parsed = 0.0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (value.empty() || ec != std::errc() || end != value.data() + value.size() || !std::isfinite(parsed) ||
        parsed <= 0.0) {
      throw Error(ErrorCode::MalformedMap, "bad cellsize header '" + std::string(lines.front()) + "'");
    }
    cell_size = parsed;
    first = 1;
  }
  if (first >= lines.size()) {
    throw Error(ErrorCode::EmptyMap, "map text has no rows");
  }

  const int height = static_cast<int>(lines.size() - first);
  const int width = static_cast<int>(lines[first].size());
  if (width == 0) {
    throw Error(ErrorCode::MalformedMap, "empty first row");
  }
  std::vector<CellCoord> obstacles;
  for (int i = 0; i < height; ++i) {
    std::string_view line = lines[first + static_cast<std::size_t>(i)];
    if (static_cast<int>(line.size()) != width) {
      throw Error(ErrorCode::MalformedMap, "ragged row " + std::to_string(i + 1) + ": expected " +
                                               std::to_string(width) + " cells, got " +
                                               std::to_string(line.size()));
    }
    const int row = height - 1 - i;  // first text line is the northmost row
    for (int col = 0; col < width; ++col) {
      char ch = line[static_cast<std::size_t>(col)];
      if (ch == '#') {
        obstacles.push_back({col, row});
      } else if (ch != '.') {
        throw Error(ErrorCode::MalformedMap, std::string("illegal character '") + ch + "' at row " +
                                                 std::to_string(i + 1) + ", column " + std::to_string(col + 1));
      }
    }
  }
  return GridMap(width, height, std::move(obstacles), cell_size);
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open map file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str());
}

std::string serialize_map(const GridMap& map) {
  std::string out;
  if (map.cell_size() != 1.0) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), map.cell_size());
    (void)ec;
    out += "cellsize ";
    out.append(buf, end);
    out += '\n';
  }
  for (int row = map.height() - 1; row >= 0; --row) {
    for (int col = 0; col < map.width(); ++col) {
      out += map.is_obstacle({col, row}) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

std::vector<CellCoord> neighbors4(const GridMap& map, CellCoord c) {
  require_in_bounds(map, c);
  std::vector<CellCoord> out;
  out.reserve(4);
  for (const CellCoord& d : kSteps) {
    CellCoord n{c.col + d.col, c.row + d.row};
    if (map.is_free(n)) out.push_back(n);
  }
  return out;
}

Point2 cell_center(const GridMap& map, CellCoord c) {
  require_in_bounds(map, c);
  return {(c.col + 0.5) * map.cell_size(), (c.row + 0.5) * map.cell_size()};
}

std::optional<CellCoord> cell_at(const GridMap& map, Point2 p) {
  if (p.x < 0.0 || p.y < 0.0 || p.x > map.extent_x() || p.y > map.extent_y()) return std::nullopt;
  CellCoord c{std::min(static_cast<int>(p.x / map.cell_size()), map.width() - 1),
              std::min(static_cast<int>(p.y / map.cell_size()), map.height() - 1)};
  return c;
}

void validate_path(const GridMap& map, const WaypointPath& path) {
  if (path.empty()) {
    throw Error(ErrorCode::InvalidPath, "path has no waypoints");
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    const CellCoord& c = path.cells[i];
    if (!map.in_bounds(c)) {
      throw Error(ErrorCode::InvalidPath, "waypoint " + std::to_string(i) + " (" + to_string(c) + ") out of bounds");
    }
    if (map.is_obstacle(c)) {
      throw Error(ErrorCode::InvalidPath, "waypoint " + std::to_string(i) + " (" + to_string(c) + ") is an obstacle");
    }
    if (i > 0 && path.cells[i - 1] == c) {
      throw Error(ErrorCode::InvalidPath, "waypoint " + std::to_string(i) + " repeats its predecessor");
    }
  }
}

bool are_adjacent(CellCoord a, CellCoord b) noexcept { return manhattan(a, b) == 1; }

int manhattan(CellCoord a, CellCoord b) noexcept { return std::abs(a.col - b.col) + std::abs(a.row - b.row); }

std::vector<CellCoord> bfs_path(const GridMap& map, CellCoord from, CellCoord to) {
  if (!map.is_free(from) || !map.is_free(to)) return {};
  if (from == to) return {from};
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(map.cell_count(), kNone);
  parent[map.index(from)] = map.index(from);
  std::deque<CellCoord> queue{from};
  while (!queue.empty()) {
    CellCoord c = queue.front();
    queue.pop_front();
    for (const CellCoord& d : kSteps) {
      CellCoord n{c.col + d.col, c.row + d.row};
      if (!map.is_free(n) || parent[map.index(n)] != kNone) continue;
      parent[map.index(n)] = map.index(c);
      if (n == to) {
        std::vector<CellCoord> path{to};
        std::size_t i = map.index(to);
        while (i != map.index(from)) {
          i = parent[i];
          path.push_back(map.coord(i));
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(n);
    }
  }
  return {};
}

}  // namespace coverpath
