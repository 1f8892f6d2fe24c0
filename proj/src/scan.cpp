#include "uavloc/scan.hpp"

#include <cmath>
#include <stdexcept>

namespace uavloc {

double ground_coverage_radius(double comm_range, double altitude) {
  if (!(comm_range > altitude)) {
    throw std::invalid_argument("ground_coverage_radius: comm_range must exceed altitude");
  }
  return std::sqrt(comm_range * comm_range - altitude * altitude);
}

double ScanGrid::half_diagonal() const {
  return std::hypot(0.5 * cell_width, 0.5 * cell_height);
}

ScanGrid build_grid(const Area& sub_area, double coverage_radius) {
  if (!(sub_area.length > 0.0) || !(sub_area.width > 0.0)) {
    throw std::invalid_argument("build_grid: sub-area must have positive size");
  }
  const double side = coverage_radius * std::sqrt(2.0);
  // Guard against 2.0000000001 style round-up when the side divides exactly.
  auto cells = [side](double extent) {
    const double ratio = extent / side;
    const double nearest = std::round(ratio);
    const double n = std::abs(ratio - nearest) < 1e-9 ? nearest : std::ceil(ratio);
    return std::max(1, static_cast<int>(n));
  };
  ScanGrid g;
  g.origin = {sub_area.x0, sub_area.y0};
  g.columns = cells(sub_area.length);
  g.rows = cells(sub_area.width);
  g.cell_width = sub_area.length / g.columns;
  g.cell_height = sub_area.width / g.rows;
  return g;
}

double ScanPath::length() const {
  double total = 0.0;
  Vec3 prev = start;
  for (const auto& c : centers) {
    total += norm(c - prev);
    prev = c;
  }
  return total;
}

double ScanPath::return_length() const {
  return centers.empty() ? 0.0 : norm(start - centers.back());
}

int ScanPath::turn_count() const {
  int turns = 0;
  for (std::size_t i = 1; i < lanes.size(); ++i) {
    if (lanes[i] != lanes[i - 1]) ++turns;
  }
  return turns;
}

ScanPath boustrophedon_path(const ScanGrid& grid, const Vec2& start, double altitude) {
  ScanPath path;
  path.start = lift(start, altitude);
  // Lanes run along the longer dimension so there are fewer lane changes.
  path.column_major = grid.columns <= grid.rows;
  const int lanes = path.column_major ? grid.columns : grid.rows;
  const int per_lane = path.column_major ? grid.rows : grid.columns;

  // Begin in the corner cell nearest the start point.
  const Vec2 far_corner = grid.center(grid.columns - 1, grid.rows - 1);
  const Vec2 near_corner = grid.center(0, 0);
  const bool flip_x = std::abs(start.x - far_corner.x) < std::abs(start.x - near_corner.x);
  const bool flip_y = std::abs(start.y - far_corner.y) < std::abs(start.y - near_corner.y);

  for (int lane = 0; lane < lanes; ++lane) {
    for (int k = 0; k < per_lane; ++k) {
      const int along = (lane % 2 == 0) ? k : per_lane - 1 - k;
      int column = path.column_major ? lane : along;
      int row = path.column_major ? along : lane;
      if (flip_x) column = grid.columns - 1 - column;
      if (flip_y) row = grid.rows - 1 - row;
      path.centers.push_back(lift(grid.center(column, row), altitude));
      path.lanes.push_back(lane);
    }
  }
  return path;
}

std::vector<Area> partition_area(const Area& area, int uav_count) {
  if (uav_count < 1) {
    throw std::invalid_argument("partition_area: need at least one UAV");
  }
  std::vector<Area> strips;
  const double w = area.length / uav_count;
  for (int m = 0; m < uav_count; ++m) {
    // The last strip ends exactly at the area edge.
    const double x0 = area.x0 + w * m;
    const double x1 = (m + 1 == uav_count) ? area.x0 + area.length : area.x0 + w * (m + 1);
    strips.push_back({x0, area.y0, x1 - x0, area.width});
  }
  return strips;
}

}  // namespace uavloc
