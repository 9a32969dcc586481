#pragma once

#include <cstdint>
#include <vector>

#include "junction/geometry.hpp"
#include "junction/grid.hpp"
#include "junction/rng.hpp"
#include "junction/scenario.hpp"

namespace junction {

enum class OccluderSide { Left, Right };

// Static view-blocking rectangle beside the road, axis-aligned in world
// coordinates. The anchor is the corner nearest the intersection on the
// road-facing edge; the body extends away from the intersection (along-road)
// and away from the road (across-road).
struct Occluder {
  Vec2 anchor;
  double length = 0.0;  // along-road extent
  double width = 0.0;   // across-road extent
  OccluderSide side = OccluderSide::Left;

  AaRect rect() const {
    if (side == OccluderSide::Left)
      return {{anchor.x - length, anchor.y - width}, {anchor.x, anchor.y}};
    return {{anchor.x, anchor.y - width}, {anchor.x + length, anchor.y}};
  }
};

// Draws the episode's occluders: left, right, or both sides with equal
// probability, each dimension uniform over the spec's sets.
inline std::vector<Occluder> sample_occluders(Rng& rng, const OccluderSpec& spec) {
  const int config = rng.uniform_int(3);  // 0 = left, 1 = right, 2 = both
  std::vector<Occluder> out;
  auto draw = [&](OccluderSide side) {
    Occluder o;
    o.side = side;
    o.length = spec.fixed_length > 0.0 ? spec.fixed_length
                                       : spec.lengths[rng.uniform_int(static_cast<int>(spec.lengths.size()))];
    o.width = spec.widths[rng.uniform_int(static_cast<int>(spec.widths.size()))];
    const double dist = spec.distances[rng.uniform_int(static_cast<int>(spec.distances.size()))];
    // Near edge measured from the outer lateral boundary, kept clear of the
    // ego road so the occluder never straddles the ego path.
    double near_x = -spec.lateral_reference + dist;
    near_x = std::min(near_x, -spec.min_clear_x);
    if (side == OccluderSide::Right) near_x = -near_x;
    o.anchor = {near_x, spec.face_y};
    out.push_back(o);
  };
  if (config == 0 || config == 2) draw(OccluderSide::Left);
  if (config == 1 || config == 2) draw(OccluderSide::Right);
  return out;
}

struct VisibilityMask {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> visible;  // row-major; 1 = visible

  bool at(int r, int c) const { return visible[static_cast<size_t>(r) * cols + c] != 0; }
  void set(int r, int c, bool v) { visible[static_cast<size_t>(r) * cols + c] = v ? 1 : 0; }
};

// Ray-traces every cell center from the sensor origin; a cell is occluded iff
// the segment to its center crosses any occluder rectangle. heading orients
// the grid (+x row axis points along the ego heading).
inline VisibilityMask compute_visibility(const Vec2& sensor_origin, double heading,
                                         const std::vector<Occluder>& occluders,
                                         const GridSpec& grid) {
  VisibilityMask mask;
  mask.rows = grid.rows;
  mask.cols = grid.cols;
  mask.visible.assign(static_cast<size_t>(grid.rows) * grid.cols, 1);
  if (occluders.empty()) return mask;

  std::vector<AaRect> rects;
  rects.reserve(occluders.size());
  for (const auto& o : occluders) rects.push_back(o.rect());

  const Vec2 fwd = heading_dir(heading);
  const Vec2 left{-fwd.y, fwd.x};
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const Vec2 rel = cell_center(r, c, grid);
      const Vec2 target = sensor_origin + fwd * rel.x + left * rel.y;
      for (const auto& rect : rects) {
        if (segment_intersects_aarect(sensor_origin, target, rect)) {
          mask.set(r, c, false);
          break;
        }
      }
    }
  }
  // The sensor's own cell is visible by definition.
  if (auto own = cell_index({0.0, 0.0}, grid)) {
    mask.set(own->first, own->second, true);
  }
  return mask;
}

}  // namespace junction
