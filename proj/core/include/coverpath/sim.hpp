#pragma once

// Continuous 2D world with a unicycle (differential-drive) robot, odometry,
// and ray-cast range sensing. Time is simulated; nothing here reads a clock.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "coverpath/grid.hpp"

namespace coverpath {

/// Wraps to (-pi, pi].
double normalize_angle(double radians);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]
};

/// Axis-aligned rectangle in meters.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(Point2 p) const noexcept {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Point2 p) const noexcept;
};

struct MotionLimits {
  double linear_speed = 0.5;                     // m/s
  double angular_speed = std::numbers::pi / 2;  // rad/s
  double dt = 0.05;                              // s

  /// Throws InvalidConfig; dt must lie in (0, 0.1].
  void validate() const;
};

struct SimConfig {
  double safety_radius = 0.15;  // m
  double max_range = 5.0;       // m
};

/// Closed-form unicycle motion: straight line when w == 0, circular arc otherwise.
Pose integrate_unicycle(const Pose& pose, double v, double w, double dt);

class World {
 public:
  /// Throws OutOfBounds when the robot is outside the map.
  World(std::shared_ptr<const GridMap> map, Pose robot, std::vector<Rect> extra_obstacles = {},
        SimConfig config = {});

  const GridMap& map() const noexcept { return *map_; }
  const std::shared_ptr<const GridMap>& map_ptr() const noexcept { return map_; }
  const Pose& robot() const noexcept { return robot_; }
  double sim_time() const noexcept { return sim_time_; }
  const std::vector<Rect>& extra_obstacles() const noexcept { return extra_; }
  const SimConfig& config() const noexcept { return config_; }
  bool last_step_collided() const noexcept { return collided_; }

  /// Map obstacle cells followed by the extra (unknown) rectangles.
  const std::vector<Rect>& obstacle_rects() const noexcept { return rects_; }

  /// Point outside the map, or within safety_radius of an obstacle.
  bool penetrates(Point2 p) const noexcept;

  /// Applies (v, w) for dt seconds. When the resulting pose would penetrate
  /// an obstacle the pose is left unchanged and the collision flag is set;
  /// time advances either way. Throws CommandOutOfLimits.
  void advance(double v, double w, double dt, const MotionLimits& limits);

 private:
  std::shared_ptr<const GridMap> map_;
  Pose robot_;
  std::vector<Rect> extra_;
  SimConfig config_;
  std::vector<Rect> rects_;
  double sim_time_ = 0.0;
  bool collided_ = false;
};

/// Value-returning form of World::advance.
World step(World world, double v, double w, double dt, const MotionLimits& limits = {});

/// Pose estimate with optional zero-mean Gaussian noise. A seeded instance
/// replays the same perturbation sequence.
class Odometry {
 public:
  Odometry() = default;
  Odometry(double sigma_xy, double sigma_heading, std::uint64_t seed);

  Pose read(const World& world);

 private:
  double sigma_xy_ = 0.0;
  double sigma_heading_ = 0.0;
  std::mt19937_64 rng_{0};
};

Pose read_odometry(const World& world, Odometry& odometry);

/// Distance along a ray from `origin` at absolute angle `angle` to the
/// nearest obstacle edge or map boundary, capped at max_range.
double ray_cast(const World& world, Point2 origin, double angle);

/// One reading per bearing, relative to the robot heading.
std::vector<double> read_range(const World& world, std::span<const double> bearings);

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double v = 0.0;
  double w = 0.0;
};

using Trajectory = std::vector<TrajectorySample>;

/// Line-delimited JSON, one object per step: {"t","x","y","heading","v","w"}.
void write_trajectory_log(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_log(std::istream& in);

/// Sum of Euclidean distances between consecutive samples.
double trajectory_length(const Trajectory& trajectory);

}  // namespace coverpath
