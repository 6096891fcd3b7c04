#pragma once

// Waypoint execution: the status-transform command table, turn-and-drive and
// dog-curve followers, and the forward-beam safety stop.

#include <optional>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "coverpath/grid.hpp"
#include "coverpath/sim.hpp"

namespace coverpath {

struct TurnTo {
  double heading = 0.0;  // absolute, radians
  friend bool operator==(const TurnTo&, const TurnTo&) = default;
};

struct Forward {
  double distance = 0.0;  // meters, >= 0
  friend bool operator==(const Forward&, const Forward&) = default;
};

struct Velocity {
  double v = 0.0;
  double w = 0.0;
  friend bool operator==(const Velocity&, const Velocity&) = default;
};

using DriveCommand = std::variant<TurnTo, Forward, Velocity>;

enum class FollowMethod { TurnAndDrive, DogCurve };

std::string_view to_string(FollowMethod method);
std::optional<FollowMethod> parse_follow_method(std::string_view name);

struct FollowerConfig {
  FollowMethod method = FollowMethod::TurnAndDrive;
  double reach_threshold = 0.1;  // d
  double lookahead = 0.6;
  double safety_distance = 0.3;
  double heading_gain = 2.0;
  int max_steps_per_waypoint = 10000;
  std::vector<double> safety_bearings = {-0.5235987755982988, -0.2617993877991494, 0.0, 0.2617993877991494,
                                         0.5235987755982988};

  /// d = 0.1, lookahead = 0.6 and safety distance = 0.3, all times cell_size.
  static FollowerConfig defaults_for(double cell_size, FollowMethod method = FollowMethod::TurnAndDrive);

  /// Throws InvalidConfig.
  void validate() const;
};

/// Cardinal heading of the unit step from `from` to `to`: 0, pi/2, pi or -pi/2.
/// Throws NonAdjacentCells.
double cardinal_heading(CellCoord from, CellCoord to);

/// Empty when current == next; otherwise an optional TurnTo followed by
/// Forward(cell_size). Throws NonAdjacentCells.
std::vector<DriveCommand> status_transform(double heading, CellCoord current, CellCoord next,
                                           double cell_size = 1.0);

struct FollowResult {
  Trajectory trajectory;        // first sample is the initial pose at t = 0
  double driving_seconds = 0.0;  // simulated
  std::vector<CellCoord> reached;
};

/// SafetyStop or StalledProgress, carrying everything driven up to the stop.
class FollowError : public Error {
 public:
  FollowError(ErrorCode code, const std::string& message, Trajectory trajectory, double driving_seconds, Pose pose,
              std::optional<double> range, std::vector<CellCoord> reached);

  const Trajectory& trajectory() const noexcept { return trajectory_; }
  double driving_seconds() const noexcept { return driving_seconds_; }
  const Pose& pose() const noexcept { return pose_; }
  const std::optional<double>& range() const noexcept { return range_; }
  const std::vector<CellCoord>& reached() const noexcept { return reached_; }

 private:
  Trajectory trajectory_;
  double driving_seconds_;
  Pose pose_;
  std::optional<double> range_;
  std::vector<CellCoord> reached_;
};

/// Drives `path` (BFS-expanded between non-adjacent waypoints) waypoint by
/// waypoint, advancing once the odometry estimate is within d of the cell
/// center. Without an odometry source the true pose is used.
FollowResult follow(World& world, const WaypointPath& path, const FollowerConfig& cfg, const MotionLimits& limits,
                    Odometry* odometry = nullptr);

/// Free cells whose center came within reach_threshold (default 0.1 * cell
/// size) of some trajectory sample.
std::set<CellCoord> visited_cells(const Trajectory& trajectory, const GridMap& map,
                                  std::optional<double> reach_threshold = {});

}  // namespace coverpath
