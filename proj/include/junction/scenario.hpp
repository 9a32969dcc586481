#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "junction/geometry.hpp"

namespace junction {

// Polyline path with arc-length lookup. Traffic lanes are straight; the ego
// path may contain a discretized turn arc.
struct LanePath {
  int id = 0;
  std::vector<Vec2> waypoints;
  double speed_limit = 20.0;

  std::vector<double> cum_arc;  // derived; cum_arc[i] = arc length up to waypoint i

  void finalize() {
    if (waypoints.size() < 2) throw std::invalid_argument("LanePath needs >= 2 waypoints");
    if (speed_limit <= 0.0) throw std::invalid_argument("LanePath speed_limit must be > 0");
    cum_arc.assign(waypoints.size(), 0.0);
    for (size_t i = 1; i < waypoints.size(); ++i) {
      const double seg = (waypoints[i] - waypoints[i - 1]).norm();
      if (seg <= 0.0) throw std::invalid_argument("LanePath waypoints must be strictly ordered");
      cum_arc[i] = cum_arc[i - 1] + seg;
    }
  }

  double length() const { return cum_arc.back(); }

  Vec2 point_at(double s) const {
    const size_t i = segment_index(s);
    const double t = (s - cum_arc[i]) / (cum_arc[i + 1] - cum_arc[i]);
    const double tc = std::clamp(t, 0.0, 1.0);
    return waypoints[i] + (waypoints[i + 1] - waypoints[i]) * tc;
  }

  double heading_at(double s) const {
    const size_t i = segment_index(s);
    const Vec2 d = waypoints[i + 1] - waypoints[i];
    return std::atan2(d.y, d.x);
  }

 private:
  size_t segment_index(double s) const {
    if (s <= 0.0) return 0;
    if (s >= cum_arc.back()) return waypoints.size() - 2;
    size_t lo = 0, hi = waypoints.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (cum_arc[mid] <= s ? lo : hi) = mid;
    }
    return lo;
  }
};

// IDM parameters plus the Krauss imperfection factor.
struct DriverParams {
  double desired_speed = 20.0;  // v0
  double max_accel = 2.5;       // a
  double comfort_decel = 2.0;   // b
  double min_gap = 2.0;         // s0
  double headway = 1.0;         // T
  double accel_exponent = 4.0;  // delta
  double imperfection = 0.25;   // sigma in [0,1]

  void validate() const {
    if (desired_speed <= 0 || max_accel <= 0 || comfort_decel <= 0 || min_gap <= 0 ||
        headway <= 0 || accel_exponent <= 0)
      throw std::invalid_argument("DriverParams must be strictly positive");
    if (imperfection < 0.0 || imperfection > 1.0)
      throw std::invalid_argument("DriverParams imperfection must be in [0,1]");
  }
};

// Region where the ego path and a traffic lane can put vehicle footprints in
// contact, expressed as an arc interval on each.
struct ConflictZone {
  int lane_id = 0;
  double ego_entry = 0.0, ego_exit = 0.0;
  double lane_entry = 0.0, lane_exit = 0.0;
};

// Sampling spec for static view-blocking rectangles next to the crossing road.
struct OccluderSpec {
  std::vector<double> lengths{30.0, 60.0, 90.0};
  std::vector<double> widths{0.5, 1.0, 2.0};
  std::vector<double> distances{51.0, 61.0, 91.0};
  double lateral_reference = 90.0;  // outer boundary the distances are measured from
  double face_y = 0.0;              // y of the occluder edge facing the road
  double min_clear_x = 4.7;         // keep occluders at least this far from the ego road center
  double fixed_length = 0.0;        // > 0 pins the length (occlusion study sweeps it)
};

enum class ScenarioName { Right, Left, Left2, Forward, Challenge, OccludedLeft2 };

inline const char* to_string(ScenarioName n) {
  switch (n) {
    case ScenarioName::Right: return "right";
    case ScenarioName::Left: return "left";
    case ScenarioName::Left2: return "left2";
    case ScenarioName::Forward: return "forward";
    case ScenarioName::Challenge: return "challenge";
    case ScenarioName::OccludedLeft2: return "occluded-left2";
  }
  return "?";
}

inline ScenarioName scenario_name_from_string(const std::string& s) {
  if (s == "right") return ScenarioName::Right;
  if (s == "left") return ScenarioName::Left;
  if (s == "left2") return ScenarioName::Left2;
  if (s == "forward") return ScenarioName::Forward;
  if (s == "challenge") return ScenarioName::Challenge;
  if (s == "occluded-left2") return ScenarioName::OccludedLeft2;
  throw std::invalid_argument("unknown scenario name: " + s);
}

struct Scenario {
  ScenarioName name = ScenarioName::Forward;
  std::vector<LanePath> lanes;
  LanePath ego_path;
  std::vector<ConflictZone> conflict_zones;
  double emission_probability = 0.2;  // per second per lane
  int max_steps = 100;
  double dt = 0.2;
  int warmup_steps = 75;
  bool traffic_can_decelerate = true;
  std::optional<OccluderSpec> occluder_spec;
  DriverParams driver;  // spawned cars copy this, with desired_speed drawn per car
  double speed_limit = 20.0;
  double car_length = 4.5;
  double car_width = 2.0;
  double spawn_min_gap = 24.5;

  void validate() const {
    if (dt <= 0.0) throw std::invalid_argument("Scenario dt must be > 0");
    if (max_steps <= 0) throw std::invalid_argument("Scenario max_steps must be > 0");
    if (emission_probability < 0.0 || emission_probability > 1.0)
      throw std::invalid_argument("Scenario emission_probability must be in [0,1]");
    driver.validate();
  }

  double first_conflict_ego_entry() const {
    double s = ego_path.length();
    for (const auto& z : conflict_zones) s = std::min(s, z.ego_entry);
    return s;
  }
};

namespace scenario_detail {

constexpr double kLaneWidth = 3.7;
constexpr double kLaneHalf = kLaneWidth / 2.0;
constexpr double kRoadHalfExtent = 100.0;  // lanes run from -100 to +100
constexpr double kStopLineGap = 1.0;       // bumper distance to the first conflict band

inline LanePath straight_lane(int id, double y, bool eastbound, double limit) {
  LanePath lane;
  lane.id = id;
  lane.speed_limit = limit;
  if (eastbound)
    lane.waypoints = {{-kRoadHalfExtent, y}, {kRoadHalfExtent, y}};
  else
    lane.waypoints = {{kRoadHalfExtent, y}, {-kRoadHalfExtent, y}};
  lane.finalize();
  return lane;
}

// Appends a quarter arc discretized at ~2 degree steps. ccw=false turns right.
inline void append_arc(std::vector<Vec2>& wps, Vec2 center, double radius, double a0, double a1) {
  const int steps = 45;
  for (int i = 1; i <= steps; ++i) {
    const double a = a0 + (a1 - a0) * i / steps;
    wps.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
}

// Sweeps the ego footprint along its path against each lane band to find the
// conflict arc intervals on both sides.
inline void compute_conflict_zones(Scenario& sc) {
  sc.conflict_zones.clear();
  const double ds = 0.1;
  for (const auto& lane : sc.lanes) {
    const double lane_y = lane.waypoints.front().y;
    OrientedRect band{{0.0, lane_y}, 0.0, 2.0 * kRoadHalfExtent, kLaneWidth};
    double ego_in = -1.0, ego_out = -1.0;
    for (double s = 0.0; s <= sc.ego_path.length(); s += ds) {
      OrientedRect ego{sc.ego_path.point_at(s), sc.ego_path.heading_at(s), sc.car_length,
                       sc.car_width};
      if (rects_overlap(ego, band)) {
        if (ego_in < 0.0) ego_in = s;
        ego_out = s;
      }
    }
    if (ego_in < 0.0) continue;

    std::vector<OrientedRect> ego_poses;
    for (double s = ego_in; s <= ego_out + 1e-9; s += 0.25) {
      ego_poses.push_back({sc.ego_path.point_at(s), sc.ego_path.heading_at(s), sc.car_length,
                           sc.car_width});
    }

    const double lane_heading = lane.heading_at(0.0);
    double lane_in = -1.0, lane_out = -1.0;
    for (double u = 0.0; u <= lane.length(); u += ds) {
      OrientedRect car{lane.point_at(u), lane_heading, sc.car_length, sc.car_width};
      bool overlap = false;
      for (const auto& ego : ego_poses) {
        if (rects_overlap(car, ego)) {
          overlap = true;
          break;
        }
      }
      if (overlap) {
        if (lane_in < 0.0) lane_in = u;
        lane_out = u;
      }
    }
    if (lane_in < 0.0) continue;
    sc.conflict_zones.push_back({lane.id, ego_in, ego_out, lane_in, lane_out});
  }
}

inline Scenario build(ScenarioName name) {
  Scenario sc;
  sc.name = name;
  const double limit = 20.0;
  sc.speed_limit = limit;
  sc.driver.desired_speed = limit;

  // Lane rows per scenario; all roads cross the ego road perpendicularly.
  std::vector<std::pair<double, bool>> rows;  // (lane center y, eastbound)
  switch (name) {
    case ScenarioName::Right:
    case ScenarioName::Left:
    case ScenarioName::Forward:
      rows = {{-kLaneHalf, true}, {kLaneHalf, false}};
      break;
    case ScenarioName::Left2:
    case ScenarioName::OccludedLeft2:
      rows = {{-kLaneHalf - kLaneWidth, true}, {-kLaneHalf, true}, {kLaneHalf, false}};
      break;
    case ScenarioName::Challenge:
      rows = {{-kLaneHalf - 2 * kLaneWidth, true}, {-kLaneHalf - kLaneWidth, true},
              {-kLaneHalf, true},                  {kLaneHalf, false},
              {kLaneHalf + kLaneWidth, false},     {kLaneHalf + 2 * kLaneWidth, false}};
      break;
  }
  int id = 1;
  double south_edge = 0.0;
  for (auto [y, east] : rows) {
    sc.lanes.push_back(straight_lane(id++, y, east, limit));
    south_edge = std::min(south_edge, y - kLaneHalf);
  }

  const double half_len = sc.car_length / 2.0;
  const double start_y = south_edge - kStopLineGap - half_len;  // ego center at episode start
  std::vector<Vec2> wps;
  wps.push_back({0.0, start_y});
  switch (name) {
    case ScenarioName::Right: {
      const double r = 3.0;
      wps.push_back({0.0, -kLaneHalf - r});
      append_arc(wps, {r, -kLaneHalf - r}, r, kPi, kPi / 2.0);
      wps.push_back({20.0, -kLaneHalf});
      break;
    }
    case ScenarioName::Left: {
      const double r = 6.0;
      wps.push_back({0.0, kLaneHalf - r});
      append_arc(wps, {-r, kLaneHalf - r}, r, 0.0, kPi / 2.0);
      wps.push_back({-22.0, kLaneHalf});
      break;
    }
    case ScenarioName::Left2:
    case ScenarioName::OccludedLeft2: {
      const double r = 8.0;
      wps.push_back({0.0, kLaneHalf - r});
      append_arc(wps, {-r, kLaneHalf - r}, r, 0.0, kPi / 2.0);
      wps.push_back({-24.0, kLaneHalf});
      break;
    }
    case ScenarioName::Forward:
    case ScenarioName::Challenge: {
      wps.push_back({0.0, -south_edge + half_len + 15.0});
      break;
    }
  }
  sc.ego_path.id = 0;
  sc.ego_path.speed_limit = limit;
  sc.ego_path.waypoints = std::move(wps);
  sc.ego_path.finalize();

  if (name == ScenarioName::Challenge) sc.emission_probability = 0.7;
  if (name == ScenarioName::OccludedLeft2) {
    sc.emission_probability = 0.4;  // doubled density
    sc.max_steps = 300;
    sc.traffic_can_decelerate = false;
    OccluderSpec spec;
    spec.face_y = south_edge - 0.5;
    spec.lateral_reference = 90.0;
    spec.min_clear_x = 4.7;
    sc.occluder_spec = spec;
  }

  compute_conflict_zones(sc);
  sc.validate();
  return sc;
}

}  // namespace scenario_detail

inline Scenario make_scenario(ScenarioName name) { return scenario_detail::build(name); }

inline std::vector<ScenarioName> all_scenarios() {
  return {ScenarioName::Right, ScenarioName::Left, ScenarioName::Left2, ScenarioName::Forward,
          ScenarioName::Challenge, ScenarioName::OccludedLeft2};
}

}  // namespace junction
