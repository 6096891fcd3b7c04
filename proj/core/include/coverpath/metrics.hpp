#pragma once

// Path quality measures: coverage rate, path length, turn count, the
// theoretical shortest coverage length, success, and the CPL aggregate.

#include <span>
#include <string_view>
#include <vector>

#include "coverpath/grid.hpp"

namespace coverpath {

enum class RejectionReason {
  CoverageBelowThreshold,
  TooManyTurns,
  PathTooLong,
};

std::string_view to_string(RejectionReason reason);

/// Acceptance gate. A path passes when coverage_rate >= min_coverage,
/// turn_count <= max_turns and path_length <= max_length_ratio * shortest_length.
struct Thresholds {
  double min_coverage = 0.95;
  int max_turns = 0;
  double max_length_ratio = 2.0;

  /// min_coverage 0.95, max_turns 2 * (width + height), max_length_ratio 2.0.
  static Thresholds defaults_for(const GridMap& map);

  /// Throws InvalidConfig.
  void validate() const;
};

struct EvaluationReport {
  double coverage_rate = 0.0;    // A_i / Ā_i
  double path_length = 0.0;      // p_i, meters
  int turn_count = 0;            // τ
  double shortest_length = 0.0;  // l_i, meters
  double cpl_term = 0.0;
  bool accepted = false;
  std::vector<RejectionReason> reasons;
};

/// Unit-step expansion: consecutive waypoints that are not 4-adjacent are
/// joined with bfs_path. Throws InvalidPath.
std::vector<CellCoord> expand_path(const GridMap& map, const WaypointPath& path);

double coverage_rate(const GridMap& map, const WaypointPath& path);

/// Meters travelled along the expanded path.
double path_length(const GridMap& map, const WaypointPath& path);

/// Direction changes along a unit-step path. A reversal counts as one turn.
/// Throws InvalidPath when consecutive cells are not 4-adjacent.
int turn_count(const WaypointPath& path);

/// Lower bound on the length of any walk from `start` that visits every free
/// cell. The grid graph is bipartite, so besides the Hamiltonian bound
/// (free - 1) a walk must alternate colors: with `same` cells sharing the
/// start's color and `other` cells of the opposite color it needs at least
/// max(2 * (same - 1), 2 * other - 1) steps. Exact whenever a Hamiltonian path
/// from `start` exists. Throws StartOnObstacle or OutOfBounds.
double shortest_coverage_length(const GridMap& map, CellCoord start);

struct EpisodeLengths {
  double coverage_rate = 0.0;
  double shortest_length = 0.0;
  double path_length = 0.0;
};

/// coverage * l / max(p, l); equals coverage when both lengths are zero.
double cpl_term(double coverage, double shortest_length, double path_length);

/// Mean of per-episode cpl_terms. Throws EmptyEpisodeList.
double cpl(std::span<const EpisodeLengths> episodes);

/// coverage_rate >= min_coverage (inclusive).
bool is_success(const EvaluationReport& report, const Thresholds& thresholds);

/// Fills every field of an EvaluationReport from precomputed metrics.
EvaluationReport make_report(double coverage, double length, int turns, double shortest, const Thresholds& th);

}  // namespace coverpath
