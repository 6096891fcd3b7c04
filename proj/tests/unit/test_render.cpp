#include <gtest/gtest.h>

#include <regex>

#include "coverpath/nav.hpp"
#include "coverpath/patterns.hpp"
#include "coverpath/render.hpp"

namespace coverpath {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string attribute(const std::string& text, const std::string& element_class, const std::string& attr) {
  const std::regex re("class=\"" + element_class + "\"[^>]*" + attr + "=\"([^\"]*)\"");
  std::smatch m;
  return std::regex_search(text, m, re) ? m[1].str() : std::string();
}

TEST(RenderPath, LawnmowerOn3x3) {
  const GridMap m = GridMap::rectangle(3, 3);
  const std::string svg = render_path(m, lawnmower(m, {0, 0}));
  EXPECT_EQ(count(svg, "<svg "), 1u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<rect class=\"cell"), 9u);
  EXPECT_EQ(count(svg, "obstacle"), 0u);
  const std::string points = attribute(svg, "waypoints", "points");
  ASSERT_FALSE(points.empty());
  // 9 vertices, 8 segments.
  EXPECT_EQ(count(points, ",") , 9u);
  EXPECT_EQ(count(svg, "<g class=\"trajectory\""), 0u);
  EXPECT_EQ(count(svg, "<circle class=\"start\""), 1u);
}

TEST(RenderPath, ObstaclesAndOverlay) {
  auto map = std::make_shared<const GridMap>(GridMap(3, 3, {{1, 1}}));
  const WaypointPath path = coverage_walk(*map, {0, 0});
  World w(map, {0.5, 0.5, 0.0});
  const FollowResult r = follow(w, path, FollowerConfig{}, MotionLimits{});
  const std::string svg = render_path(*map, path, r.trajectory);
  EXPECT_EQ(count(svg, "<rect class=\"cell obstacle\""), 1u);
  EXPECT_EQ(count(svg, "<rect class=\"cell"), 9u);
  EXPECT_EQ(count(svg, "<g class=\"trajectory\""), 1u);
}

TEST(RenderPath, Deterministic) {
  const GridMap m(4, 3, {{2, 1}}, 0.5);
  const WaypointPath p = coverage_walk(m, {0, 0});
  const Trajectory t{{0.0, 0.25, 0.25, 0.0, 0.0, 0.0}, {0.05, 0.5, 0.25, 0.0, 0.5, 0.0}};
  EXPECT_EQ(render_path(m, p, t), render_path(m, p, t));
  EXPECT_NE(render_path(m, p), render_path(m, p, t));
  RenderOptions big;
  big.pixels_per_cell = 80;
  EXPECT_NE(render_path(m, p, {}, big), render_path(m, p));
}

TEST(RenderPath, NorthIsUp) {
  const GridMap m = GridMap::rectangle(1, 2);
  const std::string svg = render_path(m, WaypointPath{{{0, 0}, {0, 1}}});
  // Start (south cell) sits below the second waypoint: larger SVG y.
  const double cy = std::stod(attribute(svg, "start", "cy"));
  const RenderOptions o;
  EXPECT_DOUBLE_EQ(cy, o.margin + 1.5 * o.pixels_per_cell);
}

}  // namespace
}  // namespace coverpath
