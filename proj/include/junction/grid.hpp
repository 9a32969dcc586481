#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "junction/geometry.hpp"

namespace junction {

// Ego-frame observation grid. Rows bin the longitudinal axis (ahead of the
// sensor origin), columns the lateral axis (left negative ... right positive
// maps to col 0 ... cols-1).
struct GridSpec {
  int rows = 18;
  int cols = 26;
  double longitudinal_extent = 20.0;  // meters ahead, [0, extent)
  double lateral_extent = 90.0;       // meters to each side, [-extent, extent)

  double row_pitch() const { return longitudinal_extent / rows; }
  double col_pitch() const { return 2.0 * lateral_extent / cols; }

  bool operator==(const GridSpec& o) const {
    return rows == o.rows && cols == o.cols && longitudinal_extent == o.longitudinal_extent &&
           lateral_extent == o.lateral_extent;
  }
};

inline GridSpec make_grid_5x11() { return {5, 11, 20.0, 90.0}; }
inline GridSpec make_grid_18x26() { return {18, 26, 20.0, 90.0}; }

// Maps an ego-frame position (x = forward, y = left) to a cell. Bins are
// lower-inclusive, upper-exclusive. nullopt = outside the grid.
inline std::optional<std::pair<int, int>> cell_index(const Vec2& rel, const GridSpec& g) {
  const double lon = rel.x;
  const double lat = rel.y;
  if (lon < 0.0 || lon >= g.longitudinal_extent) return std::nullopt;
  if (lat < -g.lateral_extent || lat >= g.lateral_extent) return std::nullopt;
  const int row = static_cast<int>(lon / g.row_pitch());
  const int col = static_cast<int>((lat + g.lateral_extent) / g.col_pitch());
  if (row < 0 || row >= g.rows || col < 0 || col >= g.cols) return std::nullopt;
  return std::make_pair(row, col);
}

// Ego-frame center of a cell.
inline Vec2 cell_center(int row, int col, const GridSpec& g) {
  return {(row + 0.5) * g.row_pitch(), -g.lateral_extent + (col + 0.5) * g.col_pitch()};
}

}  // namespace junction
