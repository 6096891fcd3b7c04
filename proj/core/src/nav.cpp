#include "coverpath/nav.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coverpath/metrics.hpp"

namespace coverpath {

std::string_view to_string(FollowMethod method) {
  switch (method) {
    case FollowMethod::TurnAndDrive: return "turn_and_drive";
    case FollowMethod::DogCurve: return "dog_curve";
  }
  return "unknown";
}

std::optional<FollowMethod> parse_follow_method(std::string_view name) {
  if (name == "turn_and_drive" || name == "turn-and-drive") return FollowMethod::TurnAndDrive;
  if (name == "dog_curve" || name == "dog-curve") return FollowMethod::DogCurve;
  return std::nullopt;
}

FollowerConfig FollowerConfig::defaults_for(double cell_size, FollowMethod method) {
  FollowerConfig cfg;
  cfg.method = method;
  cfg.reach_threshold = 0.1 * cell_size;
  cfg.lookahead = 0.6 * cell_size;
  cfg.safety_distance = 0.3 * cell_size;
  return cfg;
}

void FollowerConfig::validate() const {
  if (!(reach_threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "reach_threshold must be positive");
  if (!(lookahead > reach_threshold)) {
    throw Error(ErrorCode::InvalidConfig, "lookahead must exceed reach_threshold");
  }
  if (!(safety_distance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "safety_distance must be non-negative");
  if (!(heading_gain > 0.0)) throw Error(ErrorCode::InvalidConfig, "heading_gain must be positive");
  if (max_steps_per_waypoint < 1) throw Error(ErrorCode::InvalidConfig, "max_steps_per_waypoint must be >= 1");
}

double cardinal_heading(CellCoord from, CellCoord to) {
  const int dc = to.col - from.col;
  const int dr = to.row - from.row;
  if (dc == 1 && dr == 0) return 0.0;
  if (dc == 0 && dr == 1) return std::numbers::pi / 2;
  if (dc == -1 && dr == 0) return std::numbers::pi;
  if (dc == 0 && dr == -1) return -std::numbers::pi / 2;
  throw Error(ErrorCode::NonAdjacentCells, to_string(from) + " and " + to_string(to) + " are not 4-adjacent");
}

std::vector<DriveCommand> status_transform(double heading, CellCoord current, CellCoord next, double cell_size) {
  if (current == next) return {};
  const double target = cardinal_heading(current, next);
  std::vector<DriveCommand> out;
  if (std::abs(normalize_angle(target - heading)) > 1e-6) out.emplace_back(TurnTo{target});
  out.emplace_back(Forward{cell_size});
  return out;
}

FollowError::FollowError(ErrorCode code, const std::string& message, Trajectory trajectory, double driving_seconds,
                         Pose pose, std::optional<double> range, std::vector<CellCoord> reached)
    : Error(code, message),
      trajectory_(std::move(trajectory)),
      driving_seconds_(driving_seconds),
      pose_(pose),
      range_(range),
      reached_(std::move(reached)) {}

namespace {

constexpr double kTurnInPlace = 0.1;  // rad; larger heading errors rotate before driving

class Driver {
 public:
  Driver(World& world, const FollowerConfig& cfg, const MotionLimits& limits, Odometry* odometry)
      : world_(world), cfg_(cfg), limits_(limits), odometry_(odometry), t0_(world.sim_time()) {
    record(0.0, 0.0);
  }

  Pose estimate() { return odometry_ ? odometry_->read(world_) : world_.robot(); }

  void begin_waypoint() { steps_ = 0; }

  void reached(CellCoord c) { result_.reached.push_back(c); }

  void execute(const DriveCommand& cmd) {
    if (const auto* turn = std::get_if<TurnTo>(&cmd)) {
      double remaining = normalize_angle(turn->heading - estimate().heading);
      while (std::abs(remaining) > 1e-12) {
        const double w = std::clamp(remaining / limits_.dt, -limits_.angular_speed, limits_.angular_speed);
        drive(0.0, w);
        remaining -= w * limits_.dt;
      }
    } else if (const auto* fwd = std::get_if<Forward>(&cmd)) {
      double remaining = fwd->distance;
      while (remaining > 1e-12) {
        const double v = std::min(limits_.linear_speed, remaining / limits_.dt);
        drive(v, 0.0);
        remaining -= v * limits_.dt;
      }
    } else {
      const auto& vel = std::get<Velocity>(cmd);
      drive(vel.v, vel.w);
    }
  }

  // Closed-loop correction: rotate toward the goal, then drive with
  // proportional heading control until within d.
  void go_to(Point2 goal) {
    for (;;) {
      const Pose p = estimate();
      const double dist = std::hypot(goal.x - p.x, goal.y - p.y);
      if (dist < cfg_.reach_threshold) return;
      const double err = normalize_angle(std::atan2(goal.y - p.y, goal.x - p.x) - p.heading);
      if (std::abs(err) > kTurnInPlace) {
        drive(0.0, clamp_w(err / limits_.dt));
      } else {
        drive(std::min(limits_.linear_speed, dist / limits_.dt), clamp_w(cfg_.heading_gain * err));
      }
    }
  }

  // Pursuit of a lookahead point that slides along the segment a -> b.
  void pursue(Point2 a, Point2 b) {
    const double sx = b.x - a.x;
    const double sy = b.y - a.y;
    const double len = std::hypot(sx, sy);
    for (;;) {
      const Pose p = estimate();
      const double dist = std::hypot(b.x - p.x, b.y - p.y);
      if (dist < cfg_.reach_threshold) return;
      const double along = len > 0.0 ? std::clamp(((p.x - a.x) * sx + (p.y - a.y) * sy) / len, 0.0, len) : 0.0;
      const double s = std::min(len, along + cfg_.lookahead);
      const Point2 carrot = len > 0.0 ? Point2{a.x + sx * s / len, a.y + sy * s / len} : b;
      const double err = normalize_angle(std::atan2(carrot.y - p.y, carrot.x - p.x) - p.heading);
      const double v = std::min(limits_.linear_speed * std::max(0.0, std::cos(err)), dist / limits_.dt);
      drive(v, clamp_w(cfg_.heading_gain * err));
    }
  }

  FollowResult finish() {
    result_.driving_seconds = world_.sim_time() - t0_;
    return std::move(result_);
  }

 private:
  double clamp_w(double w) const { return std::clamp(w, -limits_.angular_speed, limits_.angular_speed); }

  void drive(double v, double w) {
    if (++steps_ > cfg_.max_steps_per_waypoint) {
      fail(ErrorCode::StalledProgress,
           "no waypoint reached within " + std::to_string(cfg_.max_steps_per_waypoint) + " steps", std::nullopt);
    }
    if (v > 0.0) {
      const std::vector<double> ranges = read_range(world_, cfg_.safety_bearings);
      const double nearest = ranges.empty() ? world_.config().max_range : *std::min_element(ranges.begin(), ranges.end());
      if (nearest < cfg_.safety_distance) {
        fail(ErrorCode::SafetyStop, "forward range " + std::to_string(nearest) + " m below safety distance", nearest);
      }
    }
    world_.advance(v, w, limits_.dt, limits_);
    if (world_.last_step_collided()) {
      fail(ErrorCode::SafetyStop, "motion cancelled on contact", std::nullopt);
    }
    record(v, w);
  }

  void record(double v, double w) {
    const Pose& p = world_.robot();
    result_.trajectory.push_back({world_.sim_time(), p.x, p.y, p.heading, v, w});
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& message, std::optional<double> range) {
    throw FollowError(code, message, std::move(result_.trajectory), world_.sim_time() - t0_, world_.robot(), range,
                      std::move(result_.reached));
  }

  World& world_;
  const FollowerConfig& cfg_;
  const MotionLimits& limits_;
  Odometry* odometry_;
  double t0_;
  int steps_ = 0;
  FollowResult result_;
};

}  // namespace

FollowResult follow(World& world, const WaypointPath& path, const FollowerConfig& cfg, const MotionLimits& limits,
                    Odometry* odometry) {
  cfg.validate();
  limits.validate();
  const GridMap& map = world.map();
  validate_path(map, path);
  const std::vector<CellCoord> cells = expand_path(map, path);

  Driver driver(world, cfg, limits, odometry);
  driver.begin_waypoint();
  driver.go_to(cell_center(map, cells.front()));
  driver.reached(cells.front());

  for (std::size_t i = 1; i < cells.size(); ++i) {
    driver.begin_waypoint();
    const Point2 goal = cell_center(map, cells[i]);
    if (cfg.method == FollowMethod::TurnAndDrive) {
      for (const DriveCommand& cmd : status_transform(driver.estimate().heading, cells[i - 1], cells[i], map.cell_size())) {
        driver.execute(cmd);
      }
      driver.go_to(goal);
    } else {
      driver.pursue(cell_center(map, cells[i - 1]), goal);
    }
    driver.reached(cells[i]);
  }
  return driver.finish();
}

std::set<CellCoord> visited_cells(const Trajectory& trajectory, const GridMap& map,
                                  std::optional<double> reach_threshold) {
  const double cs = map.cell_size();
  const double d = reach_threshold.value_or(0.1 * cs);
  const int reach = static_cast<int>(std::ceil(d / cs));
  std::set<CellCoord> out;
  for (const TrajectorySample& s : trajectory) {
    const int c0 = static_cast<int>(std::floor(s.x / cs));
    const int r0 = static_cast<int>(std::floor(s.y / cs));
    for (int r = r0 - reach; r <= r0 + reach; ++r) {
      for (int c = c0 - reach; c <= c0 + reach; ++c) {
        const CellCoord cell{c, r};
        if (!map.is_free(cell)) continue;
        const Point2 center = cell_center(map, cell);
        if (std::hypot(s.x - center.x, s.y - center.y) < d) out.insert(cell);
      }
    }
  }
  return out;
}

}  // namespace coverpath
