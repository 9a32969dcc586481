#pragma once

#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "junction/grid.hpp"
#include "junction/occlusion.hpp"
#include "junction/sim.hpp"

namespace junction {

constexpr double kTtcCap = 20.0;  // seconds; matches the episode horizon

// Channel layout: occupancy, heading, speed [, ttc] [, occluded, x-offset, y-offset].
struct EncoderConfig {
  GridSpec grid;
  bool include_ttc = false;
  bool include_occlusion = false;

  int channels() const { return 3 + (include_ttc ? 1 : 0) + (include_occlusion ? 3 : 0); }
  int ttc_channel_index() const { return 3; }
  int occlusion_channel_index() const { return 3 + (include_ttc ? 1 : 0); }
};

struct StateTensor {
  int rows = 0, cols = 0, channels = 0;
  std::vector<float> data;  // [row][col][channel]

  void resize(int r, int c, int ch) {
    rows = r;
    cols = c;
    channels = ch;
    data.assign(static_cast<size_t>(r) * c * ch, 0.0f);
  }
  float& at(int r, int c, int ch) {
    return data[(static_cast<size_t>(r) * cols + c) * channels + ch];
  }
  float at(int r, int c, int ch) const {
    return data[(static_cast<size_t>(r) * cols + c) * channels + ch];
  }

  // Flat little-endian serialization with a shape header.
  void serialize(std::ostream& os) const {
    const uint32_t h[3] = {static_cast<uint32_t>(rows), static_cast<uint32_t>(cols),
                           static_cast<uint32_t>(channels)};
    os.write(reinterpret_cast<const char*>(h), sizeof(h));
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(float)));
  }
  static StateTensor deserialize(std::istream& is) {
    uint32_t h[3];
    is.read(reinterpret_cast<char*>(h), sizeof(h));
    StateTensor t;
    t.resize(static_cast<int>(h[0]), static_cast<int>(h[1]), static_cast<int>(h[2]));
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    return t;
  }
};

// Constant-velocity time for a traffic car to reach its lane's conflict-zone
// entry; 0 while inside the zone, capped when past it, stopped, or conflict-free.
inline double ttc_to_conflict(const TrafficCar& car, const Scenario& sc) {
  const ConflictZone* zone = nullptr;
  for (const auto& z : sc.conflict_zones) {
    if (z.lane_id == car.state.lane_id) {
      zone = &z;
      break;
    }
  }
  if (zone == nullptr) return kTtcCap;
  const double front = car.arc + 0.5 * car.state.length;
  const double rear = car.arc - 0.5 * car.state.length;
  if (rear > zone->lane_exit) return kTtcCap;  // already past; moving away
  if (front >= zone->lane_entry) return 0.0;   // inside the zone
  if (car.state.speed < 0.05) return kTtcCap;
  return std::min(kTtcCap, (zone->lane_entry - front) / car.state.speed);
}

// Sensor origin: front-bumper center.
inline Vec2 sensor_origin(const VehicleState& ego) {
  return ego.position + heading_dir(ego.heading) * (0.5 * ego.length);
}

// Grid-encodes the world as seen from the ego. Occluded cells never carry car
// information; when the config has occlusion channels they carry the occlusion
// indicator instead. One car per cell; the car nearest the ego wins.
inline StateTensor encode(const WorldState& world, const Scenario& sc, const EncoderConfig& cfg,
                          const VisibilityMask* mask = nullptr) {
  StateTensor t;
  t.resize(cfg.grid.rows, cfg.grid.cols, cfg.channels());

  std::vector<double> best_dist(static_cast<size_t>(cfg.grid.rows) * cfg.grid.cols, 1e300);
  const Vec2 origin = sensor_origin(world.ego);
  for (const auto& car : world.traffic) {
    const Vec2 rel = into_frame(car.state.position - origin, world.ego.heading);
    const auto cell = cell_index(rel, cfg.grid);
    if (!cell) continue;
    const auto [r, c] = *cell;
    if (mask != nullptr && !mask->at(r, c)) continue;
    const double dist = rel.norm();
    const size_t flat = static_cast<size_t>(r) * cfg.grid.cols + c;
    if (dist >= best_dist[flat]) continue;
    best_dist[flat] = dist;

    t.at(r, c, 0) = 1.0f;
    const double rel_heading = wrap_angle(car.state.heading - world.ego.heading);
    t.at(r, c, 1) = static_cast<float>((rel_heading + kPi) / (2.0 * kPi));
    t.at(r, c, 2) = static_cast<float>(std::clamp(car.state.speed / sc.speed_limit, 0.0, 1.0));
    if (cfg.include_ttc) {
      t.at(r, c, cfg.ttc_channel_index()) =
          static_cast<float>(ttc_to_conflict(car, sc) / kTtcCap);
    }
    if (cfg.include_occlusion) {
      const int base = cfg.occlusion_channel_index();
      const double row_lo = r * cfg.grid.row_pitch();
      const double col_lo = -cfg.grid.lateral_extent + c * cfg.grid.col_pitch();
      t.at(r, c, base + 1) = static_cast<float>((rel.x - row_lo) / cfg.grid.row_pitch());
      t.at(r, c, base + 2) = static_cast<float>((rel.y - col_lo) / cfg.grid.col_pitch());
    }
  }

  if (cfg.include_occlusion && mask != nullptr) {
    const int base = cfg.occlusion_channel_index();
    for (int r = 0; r < cfg.grid.rows; ++r) {
      for (int c = 0; c < cfg.grid.cols; ++c) {
        if (!mask->at(r, c)) t.at(r, c, base) = 1.0f;
      }
    }
  }
  return t;
}

// Per-cell conflict-approach seconds for the encoded cars (cap where empty).
inline std::vector<double> ttc_channel(const WorldState& world, const Scenario& sc,
                                       const GridSpec& grid,
                                       const VisibilityMask* mask = nullptr) {
  std::vector<double> out(static_cast<size_t>(grid.rows) * grid.cols, kTtcCap);
  std::vector<double> best_dist(out.size(), 1e300);
  const Vec2 origin = sensor_origin(world.ego);
  for (const auto& car : world.traffic) {
    const Vec2 rel = into_frame(car.state.position - origin, world.ego.heading);
    const auto cell = cell_index(rel, grid);
    if (!cell) continue;
    const auto [r, c] = *cell;
    if (mask != nullptr && !mask->at(r, c)) continue;
    const double dist = rel.norm();
    const size_t flat = static_cast<size_t>(r) * grid.cols + c;
    if (dist >= best_dist[flat]) continue;
    best_dist[flat] = dist;
    out[flat] = ttc_to_conflict(car, sc);
  }
  return out;
}

}  // namespace junction
