#pragma once

#include <vector>

#include "uavloc/geometry.hpp"
#include "uavloc/kinematics.hpp"

namespace uavloc {

/// sqrt(comm_range² − h²). Throws std::invalid_argument when comm_range <= h.
double ground_coverage_radius(double comm_range, double altitude);

/// Equal rectangular cells whose half-diagonal fits inside the ground coverage radius.
struct ScanGrid {
  Vec2 origin;
  double cell_width = 0.0;
  double cell_height = 0.0;
  int columns = 0;
  int rows = 0;

  Vec2 center(int column, int row) const {
    return {origin.x + (column + 0.5) * cell_width, origin.y + (row + 0.5) * cell_height};
  }
  double half_diagonal() const;
};

/// Fewest cells of side ≤ g·√2 tiling `sub_area`.
ScanGrid build_grid(const Area& sub_area, double coverage_radius);

/// Serpentine coverage path. The UAV flies start → centers[0] → … → centers[n−1];
/// `lanes[i]` is the sweep lane of centers[i]. The return leg to `start` is
/// not flown during the scan.
struct ScanPath {
  Vec3 start;
  std::vector<Vec3> centers;
  std::vector<int> lanes;
  bool column_major = true;

  /// start → first center → … → last center.
  double length() const;
  /// Last center back to start.
  double return_length() const;
  int turn_count() const;
};

ScanPath boustrophedon_path(const ScanGrid& grid, const Vec2& start, double altitude);

/// M equal-width vertical strips.
std::vector<Area> partition_area(const Area& area, int uav_count);

}  // namespace uavloc
