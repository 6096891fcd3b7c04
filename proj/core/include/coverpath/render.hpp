#pragma once

#include <string>

#include "coverpath/grid.hpp"
#include "coverpath/sim.hpp"

namespace coverpath {

struct RenderOptions {
  double pixels_per_cell = 40.0;
  double margin = 10.0;
};

/// Standalone SVG: one <rect> per cell (obstacles filled), the waypoint
/// polyline, an optional executed-trajectory group and a start marker.
/// Output depends only on the arguments.
std::string render_path(const GridMap& map, const WaypointPath& path, const Trajectory& trajectory = {},
                        const RenderOptions& options = {});

}  // namespace coverpath
