#include "coverpath/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

namespace coverpath {

double normalize_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

double Rect::distance_to(Point2 p) const noexcept {
  const double dx = std::max({min_x - p.x, 0.0, p.x - max_x});
  const double dy = std::max({min_y - p.y, 0.0, p.y - max_y});
  return std::hypot(dx, dy);
}

void MotionLimits::validate() const {
  if (!(linear_speed > 0.0) || !std::isfinite(linear_speed)) {
    throw Error(ErrorCode::InvalidConfig, "linear_speed must be positive");
  }
  if (!(angular_speed > 0.0) || !std::isfinite(angular_speed)) {
    throw Error(ErrorCode::InvalidConfig, "angular_speed must be positive");
  }
  if (!(dt > 0.0) || dt > 0.1) {
    throw Error(ErrorCode::InvalidConfig, "dt must lie in (0, 0.1]");
  }
}

Pose integrate_unicycle(const Pose& pose, double v, double w, double dt) {
  Pose out = pose;
  if (w == 0.0) {
    out.x += v * dt * std::cos(pose.heading);
    out.y += v * dt * std::sin(pose.heading);
  } else {
    const double h1 = pose.heading + w * dt;
    out.x += v / w * (std::sin(h1) - std::sin(pose.heading));
    out.y -= v / w * (std::cos(h1) - std::cos(pose.heading));
  }
  out.heading = normalize_angle(pose.heading + w * dt);
  return out;
}

World::World(std::shared_ptr<const GridMap> map, Pose robot, std::vector<Rect> extra_obstacles, SimConfig config)
    : map_(std::move(map)), robot_(robot), extra_(std::move(extra_obstacles)), config_(config) {
  if (!map_) throw Error(ErrorCode::InvalidConfig, "world needs a map");
  if (robot_.x < 0.0 || robot_.y < 0.0 || robot_.x > map_->extent_x() || robot_.y > map_->extent_y()) {
    throw Error(ErrorCode::OutOfBounds, "robot pose outside the map");
  }
  robot_.heading = normalize_angle(robot_.heading);
  const double cs = map_->cell_size();
  for (const CellCoord& c : map_->obstacles()) {
    rects_.push_back({c.col * cs, c.row * cs, (c.col + 1) * cs, (c.row + 1) * cs});
  }
  rects_.insert(rects_.end(), extra_.begin(), extra_.end());
}

bool World::penetrates(Point2 p) const noexcept {
  if (p.x < 0.0 || p.y < 0.0 || p.x > map_->extent_x() || p.y > map_->extent_y()) return true;
  for (const Rect& r : rects_) {
    if (r.distance_to(p) < config_.safety_radius) return true;
  }
  return false;
}

void World::advance(double v, double w, double dt, const MotionLimits& limits) {
  constexpr double kSlack = 1e-12;
  if (!std::isfinite(v) || !std::isfinite(w) || std::abs(v) > limits.linear_speed * (1 + kSlack) ||
      std::abs(w) > limits.angular_speed * (1 + kSlack)) {
    throw Error(ErrorCode::CommandOutOfLimits, "command v=" + std::to_string(v) + " w=" + std::to_string(w) +
                                                   " exceeds motion limits");
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::CommandOutOfLimits, "dt must be a finite non-negative duration");
  }
  const Pose next = integrate_unicycle(robot_, v, w, dt);
  const bool moved = next.x != robot_.x || next.y != robot_.y;
  collided_ = moved && penetrates({next.x, next.y});
  if (!collided_) robot_ = next;
  sim_time_ += dt;
}

World step(World world, double v, double w, double dt, const MotionLimits& limits) {
  world.advance(v, w, dt, limits);
  return world;
}

Odometry::Odometry(double sigma_xy, double sigma_heading, std::uint64_t seed)
    : sigma_xy_(sigma_xy), sigma_heading_(sigma_heading), rng_(seed) {
  if (sigma_xy < 0.0 || sigma_heading < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "odometry noise must be non-negative");
  }
}

Pose Odometry::read(const World& world) {
  Pose p = world.robot();
  if (sigma_xy_ > 0.0) {
    std::normal_distribution<double> xy(0.0, sigma_xy_);
    p.x += xy(rng_);
    p.y += xy(rng_);
  }
  if (sigma_heading_ > 0.0) {
    std::normal_distribution<double> h(0.0, sigma_heading_);
    p.heading = normalize_angle(p.heading + h(rng_));
  }
  return p;
}

Pose read_odometry(const World& world, Odometry& odometry) { return odometry.read(world); }

double ray_cast(const World& world, Point2 origin, double angle) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double max_range = world.config().max_range;
  double best = max_range;

  // Map boundary: the ray starts inside the box, so take the exit distance.
  auto exit_along = [](double o, double d, double lo, double hi) {
    if (d > 0.0) return (hi - o) / d;
    if (d < 0.0) return (lo - o) / d;
    return std::numeric_limits<double>::infinity();
  };
  best = std::min({best, exit_along(origin.x, dx, 0.0, world.map().extent_x()),
                   exit_along(origin.y, dy, 0.0, world.map().extent_y())});

  for (const Rect& r : world.obstacle_rects()) {
    if (r.contains(origin)) return 0.0;
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    bool miss = false;
    auto slab = [&](double o, double d, double lo, double hi) {
      if (d == 0.0) {
        if (o < lo || o > hi) miss = true;
        return;
      }
      double t1 = (lo - o) / d;
      double t2 = (hi - o) / d;
      if (t1 > t2) std::swap(t1, t2);
      t_near = std::max(t_near, t1);
      t_far = std::min(t_far, t2);
    };
    slab(origin.x, dx, r.min_x, r.max_x);
    slab(origin.y, dy, r.min_y, r.max_y);
    if (!miss && t_near <= t_far && t_near >= 0.0) best = std::min(best, t_near);
  }
  return std::max(0.0, best);
}

std::vector<double> read_range(const World& world, std::span<const double> bearings) {
  std::vector<double> out;
  out.reserve(bearings.size());
  const Pose& p = world.robot();
  for (double b : bearings) out.push_back(ray_cast(world, {p.x, p.y}, p.heading + b));
  return out;
}

void write_trajectory_log(std::ostream& out, const Trajectory& trajectory) {
  for (const TrajectorySample& s : trajectory) {
    nlohmann::ordered_json j = {{"t", s.t}, {"x", s.x}, {"y", s.y}, {"heading", s.heading}, {"v", s.v}, {"w", s.w}};
    out << j.dump() << '\n';
  }
}

Trajectory read_trajectory_log(std::istream& in) {
  Trajectory out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("t").get<double>(), j.at("x").get<double>(), j.at("y").get<double>(),
                     j.at("heading").get<double>(), j.value("v", 0.0), j.value("w", 0.0)});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, "trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

double trajectory_length(const Trajectory& trajectory) {
  double total = 0.0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    total += std::hypot(trajectory[i].x - trajectory[i - 1].x, trajectory[i].y - trajectory[i - 1].y);
  }
  return total;
}

}  // namespace coverpath
