#include "coverpath/render.hpp"

#include <cmath>
#include <cstdio>

namespace coverpath {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

class Canvas {
 public:
  Canvas(const GridMap& map, const RenderOptions& o)
      : scale_(o.pixels_per_cell / map.cell_size()), margin_(o.margin), height_m_(map.extent_y()) {}

  double x(double meters) const { return margin_ + meters * scale_; }
  double y(double meters) const { return margin_ + (height_m_ - meters) * scale_; }
  double len(double meters) const { return meters * scale_; }

 private:
  double scale_;
  double margin_;
  double height_m_;
};

}  // namespace

std::string render_path(const GridMap& map, const WaypointPath& path, const Trajectory& trajectory,
                        const RenderOptions& options) {
  validate_path(map, path);
  const Canvas cv(map, options);
  const double cs = map.cell_size();
  const double width_px = 2 * options.margin + map.width() * options.pixels_per_cell;
  const double height_px = 2 * options.margin + map.height() * options.pixels_per_cell;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_px) + "\" height=\"" + num(height_px) +
         "\" viewBox=\"0 0 " + num(width_px) + " " + num(height_px) + "\">\n";
  out += "<g class=\"grid\" stroke=\"#888888\" stroke-width=\"1\">\n";
  for (int r = map.height() - 1; r >= 0; --r) {
    for (int c = 0; c < map.width(); ++c) {
      const bool blocked = map.is_obstacle({c, r});
      out += "<rect class=\"" + std::string(blocked ? "cell obstacle" : "cell") + "\" x=\"" + num(cv.x(c * cs)) +
             "\" y=\"" + num(cv.y((r + 1) * cs)) + "\" width=\"" + num(cv.len(cs)) + "\" height=\"" +
             num(cv.len(cs)) + "\" fill=\"" + (blocked ? "#333333" : "#ffffff") + "\"/>\n";
    }
  }
  out += "</g>\n";

  out += "<polyline class=\"waypoints\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"3\" points=\"";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Point2 p = cell_center(map, path.cells[i]);
    if (i > 0) out += ' ';
    out += num(cv.x(p.x)) + "," + num(cv.y(p.y));
  }
  out += "\"/>\n";

  if (!trajectory.empty()) {
    // Thin the trace to one vertex per 2% of a cell so files stay small.
    const double min_gap = 0.02 * cs;
    out += "<g class=\"trajectory\">\n<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    double last_x = trajectory.front().x;
    double last_y = trajectory.front().y;
    out += num(cv.x(last_x)) + "," + num(cv.y(last_y));
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
      const TrajectorySample& s = trajectory[i];
      const bool final = i + 1 == trajectory.size();
      if (!final && std::hypot(s.x - last_x, s.y - last_y) < min_gap) continue;
      out += ' ' + num(cv.x(s.x)) + "," + num(cv.y(s.y));
      last_x = s.x;
      last_y = s.y;
    }
    out += "\"/>\n</g>\n";
  }

  const Point2 start = cell_center(map, path.front());
  out += "<circle class=\"start\" cx=\"" + num(cv.x(start.x)) + "\" cy=\"" + num(cv.y(start.y)) + "\" r=\"" +
         num(cv.len(0.2 * cs)) + "\" fill=\"#2ca02c\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace coverpath
