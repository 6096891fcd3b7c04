#include "coverpath/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace coverpath {

std::string_view to_string(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::CoverageBelowThreshold: return "CoverageBelowThreshold";
    case RejectionReason::TooManyTurns: return "TooManyTurns";
    case RejectionReason::PathTooLong: return "PathTooLong";
  }
  return "Unknown";
}

Thresholds Thresholds::defaults_for(const GridMap& map) {
  Thresholds th;
  th.min_coverage = 0.95;
  th.max_turns = 2 * (map.width() + map.height());
  th.max_length_ratio = 2.0;
  return th;
}

void Thresholds::validate() const {
  if (!std::isfinite(min_coverage) || min_coverage < 0.0 || min_coverage > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "min_coverage must lie in [0, 1]");
  }
  if (max_turns < 0) {
    throw Error(ErrorCode::InvalidConfig, "max_turns must be non-negative");
  }
  if (!std::isfinite(max_length_ratio) || max_length_ratio < 1.0) {
    throw Error(ErrorCode::InvalidConfig, "max_length_ratio must be finite and >= 1");
  }
}

std::vector<CellCoord> expand_path(const GridMap& map, const WaypointPath& path) {
  validate_path(map, path);
  std::vector<CellCoord> out{path.front()};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const CellCoord& from = path.cells[i - 1];
    const CellCoord& to = path.cells[i];
    if (are_adjacent(from, to)) {
      out.push_back(to);
      continue;
    }
    std::vector<CellCoord> bridge = bfs_path(map, from, to);
    if (bridge.empty()) {
      // Unreachable only on maps that bypassed the connectivity check.
      throw Error(ErrorCode::InvalidPath, "no route between " + to_string(from) + " and " + to_string(to));
    }
    out.insert(out.end(), bridge.begin() + 1, bridge.end());
  }
  return out;
}

double coverage_rate(const GridMap& map, const WaypointPath& path) {
  std::vector<CellCoord> steps = expand_path(map, path);
  std::vector<bool> seen(map.cell_count(), false);
  std::size_t distinct = 0;
  for (const CellCoord& c : steps) {
    if (!seen[map.index(c)]) {
      seen[map.index(c)] = true;
      ++distinct;
    }
  }
  return static_cast<double>(distinct) / static_cast<double>(map.free_count());
}

double path_length(const GridMap& map, const WaypointPath& path) {
  std::vector<CellCoord> steps = expand_path(map, path);
  return static_cast<double>(steps.size() - 1) * map.cell_size();
}

int turn_count(const WaypointPath& path) {
  if (path.empty()) {
    throw Error(ErrorCode::InvalidPath, "path has no waypoints");
  }
  int turns = 0;
  CellCoord previous_step{0, 0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const CellCoord& a = path.cells[i - 1];
    const CellCoord& b = path.cells[i];
    if (!are_adjacent(a, b)) {
      throw Error(ErrorCode::InvalidPath, "waypoints " + to_string(a) + " and " + to_string(b) +
                                              " are not a unit step; expand the path first");
    }
    CellCoord step{b.col - a.col, b.row - a.row};
    if (i > 1 && step != previous_step) ++turns;
    previous_step = step;
  }
  return turns;
}

double shortest_coverage_length(const GridMap& map, CellCoord start) {
  if (!map.in_bounds(start)) {
    throw Error(ErrorCode::OutOfBounds, "start " + to_string(start) + " outside map");
  }
  if (map.is_obstacle(start)) {
    throw Error(ErrorCode::StartOnObstacle, "start " + to_string(start) + " is an obstacle");
  }
  const int start_color = (start.col + start.row) & 1;
  long long same = 0;
  long long other = 0;
  for (const CellCoord& c : map.free_cells()) {
    (((c.col + c.row) & 1) == start_color ? same : other) += 1;
  }
  const long long hamiltonian = same + other - 1;
  const long long steps = std::max({hamiltonian, 2 * (same - 1), 2 * other - 1});
  return static_cast<double>(steps) * map.cell_size();
}

double cpl_term(double coverage, double shortest_length, double path_length) {
  const double denom = std::max(path_length, shortest_length);
  if (denom <= 0.0) return coverage;
  return coverage * shortest_length / denom;
}

double cpl(std::span<const EpisodeLengths> episodes) {
  if (episodes.empty()) {
    throw Error(ErrorCode::EmptyEpisodeList, "CPL needs at least one episode");
  }
  double sum = 0.0;
  for (const EpisodeLengths& e : episodes) {
    sum += cpl_term(e.coverage_rate, e.shortest_length, e.path_length);
  }
  return sum / static_cast<double>(episodes.size());
}

bool is_success(const EvaluationReport& report, const Thresholds& thresholds) {
  return report.coverage_rate >= thresholds.min_coverage;
}

EvaluationReport make_report(double coverage, double length, int turns, double shortest, const Thresholds& th) {
  EvaluationReport r;
  r.coverage_rate = coverage;
  r.path_length = length;
  r.turn_count = turns;
  r.shortest_length = shortest;
  r.cpl_term = cpl_term(coverage, shortest, length);
  if (coverage < th.min_coverage) r.reasons.push_back(RejectionReason::CoverageBelowThreshold);
  if (turns > th.max_turns) r.reasons.push_back(RejectionReason::TooManyTurns);
  // Small slack so a path exactly at the ratio is not rejected by rounding.
  if (length > th.max_length_ratio * shortest * (1.0 + 1e-12)) r.reasons.push_back(RejectionReason::PathTooLong);
  r.accepted = r.reasons.empty();
  return r;
}

}  // namespace coverpath
