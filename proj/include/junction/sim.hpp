#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "junction/geometry.hpp"
#include "junction/occlusion.hpp"
#include "junction/rng.hpp"
#include "junction/scenario.hpp"

namespace junction {

constexpr double kEmergencyDecel = 6.0;      // bound on IDM output
constexpr double kBrakingThreshold = -0.5;   // accel below this counts as braking
constexpr double kUnboundedGap = std::numeric_limits<double>::infinity();

enum class Phase { Waiting, Creeping, Committed, Done };

enum class EventKind { None, Collision, GoalReached, Timeout };

struct VehicleState {
  Vec2 position;
  double heading = 0.0;  // [-pi, pi)
  double speed = 0.0;
  double length = 4.5;
  double width = 2.0;
  int lane_id = -1;  // -1 = ego path
  bool is_ego = false;

  OrientedRect rect() const { return {position, heading, length, width}; }
};

struct TrafficCar {
  VehicleState state;
  DriverParams params;
  double arc = 0.0;    // along its lane
  double accel = 0.0;  // effective accel applied last step
  int id = 0;
};

struct WorldState {
  int step = 0;
  VehicleState ego;
  double ego_arc = 0.0;
  double ego_accel = 0.0;  // effective ego accel last step
  Phase phase = Phase::Waiting;
  bool ego_present = true;
  std::vector<TrafficCar> traffic;
  std::vector<Occluder> occluders;
  Rng rng;
  double braking_seconds = 0.0;  // accumulated traffic braking time
  int next_car_id = 1;
  std::vector<int> pending_spawns;  // queued demand per lane
};

// Intelligent Driver Model. gap may be kUnboundedGap for a free road; a
// non-positive finite gap means the caller failed to flag a collision first.
inline double idm_acceleration(double v, double gap, double lead_speed, const DriverParams& p) {
  if (std::isfinite(gap) && gap <= 0.0)
    throw std::invalid_argument("idm_acceleration: gap must be positive");
  double acc = p.max_accel * (1.0 - std::pow(v / p.desired_speed, p.accel_exponent));
  if (std::isfinite(gap)) {
    const double dv = v - lead_speed;
    double sstar =
        p.min_gap + v * p.headway + v * dv / (2.0 * std::sqrt(p.max_accel * p.comfort_decel));
    sstar = std::max(sstar, 0.0);
    const double z = sstar / gap;
    acc -= p.max_accel * z * z;
  }
  return std::clamp(acc, -kEmergencyDecel, p.max_accel);
}

// Krauss-style driver imperfection: a uniform random reduction of the
// commanded acceleration. Braking commands are never weakened.
inline double krauss_perturb(double accel, double sigma, Rng& rng) {
  return accel - sigma * rng.uniform() * std::max(accel, 0.0);
}

// True iff the ego's footprint intersects any traffic footprint.
inline bool check_collision(const VehicleState& ego, const std::vector<TrafficCar>& traffic) {
  const OrientedRect er = ego.rect();
  for (const auto& car : traffic) {
    if (rects_overlap(er, car.state.rect())) return true;
  }
  return false;
}

namespace sim_detail {

struct LaneFrame {
  Vec2 origin;
  Vec2 dir;
  double heading;
  double length;
};

inline LaneFrame lane_frame(const LanePath& lane) {
  const Vec2 d = lane.waypoints.back() - lane.waypoints.front();
  const double len = d.norm();
  return {lane.waypoints.front(), d * (1.0 / len), lane.heading_at(0.0), len};
}

// Gap and speed of the nearest obstruction ahead of a car in its lane,
// considering both same-lane traffic and (when present) the ego's footprint.
inline bool leader_ahead(const WorldState& world, const Scenario& sc, size_t idx,
                         const LaneFrame& frame, double* gap, double* lead_speed) {
  const TrafficCar& me = world.traffic[idx];
  bool found = false;
  double best_gap = kUnboundedGap;
  double best_speed = 0.0;

  for (size_t j = 0; j < world.traffic.size(); ++j) {
    if (j == idx) continue;
    const TrafficCar& other = world.traffic[j];
    if (other.state.lane_id != me.state.lane_id) continue;
    if (other.arc <= me.arc) continue;
    const double g = other.arc - me.arc - sc.car_length;
    if (g < best_gap) {
      best_gap = g;
      best_speed = other.state.speed;
      found = true;
    }
  }

  if (world.ego_present) {
    const OrientedRect band{{0.0, frame.origin.y}, frame.heading, 2.0 * frame.length,
                            scenario_detail::kLaneWidth};
    const OrientedRect ego_rect = world.ego.rect();
    if (rects_overlap(ego_rect, band)) {
      const double ego_arc_in_lane = (world.ego.position - frame.origin).dot(frame.dir);
      if (ego_arc_in_lane > me.arc) {
        const double rel = world.ego.heading - frame.heading;
        const double ego_ext =
            0.5 * (std::abs(std::cos(rel)) * world.ego.length + std::abs(std::sin(rel)) * world.ego.width);
        const double g = ego_arc_in_lane - ego_ext - (me.arc + 0.5 * sc.car_length);
        if (g < best_gap) {
          best_gap = g;
          best_speed = std::max(0.0, world.ego.speed * std::cos(rel));
          found = true;
        }
      }
    }
  }

  if (!found) return false;
  *gap = std::max(best_gap, 0.1);
  *lead_speed = best_speed;
  return true;
}

}  // namespace sim_detail

// Draws per-lane Bernoulli demand and releases queued vehicles whenever the
// lane origin has room. Queuing the blocked draws keeps the long-run emission
// rate at the configured value. Returns the vehicles added this step.
inline std::vector<VehicleState> spawn_traffic(WorldState& world, const Scenario& sc, Rng& rng) {
  std::vector<VehicleState> spawned;
  if (world.pending_spawns.size() != sc.lanes.size())
    world.pending_spawns.assign(sc.lanes.size(), 0);
  const double p = std::min(1.0, sc.emission_probability * sc.dt);
  for (size_t li = 0; li < sc.lanes.size(); ++li) {
    const LanePath& lane = sc.lanes[li];
    if (rng.bernoulli(p)) world.pending_spawns[li] += 1;
    if (world.pending_spawns[li] == 0) continue;

    bool blocked = false;
    for (const auto& car : world.traffic) {
      if (car.state.lane_id == lane.id && car.arc < sc.spawn_min_gap) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;

    world.pending_spawns[li] -= 1;
    TrafficCar car;
    car.id = world.next_car_id++;
    car.arc = 0.0;
    car.params = sc.driver;
    car.params.desired_speed = rng.uniform(0.8, 1.0) * lane.speed_limit;
    car.state.position = lane.point_at(0.0);
    car.state.heading = wrap_angle(lane.heading_at(0.0));
    car.state.speed = car.params.desired_speed;
    car.state.length = sc.car_length;
    car.state.width = sc.car_width;
    car.state.lane_id = lane.id;
    world.traffic.push_back(car);
    spawned.push_back(car.state);
  }
  return spawned;
}

namespace sim_detail {

// One fixed timestep of traffic-only dynamics: car following, integration,
// exits, spawning.
inline void advance_traffic(WorldState& world, const Scenario& sc) {
  std::vector<LaneFrame> frames;
  frames.reserve(sc.lanes.size());
  for (const auto& lane : sc.lanes) frames.push_back(lane_frame(lane));
  auto frame_of = [&](int lane_id) -> const LaneFrame& {
    for (size_t i = 0; i < sc.lanes.size(); ++i)
      if (sc.lanes[i].id == lane_id) return frames[i];
    throw std::logic_error("unknown lane id");
  };

  std::vector<double> accels(world.traffic.size(), 0.0);
  if (sc.traffic_can_decelerate) {
    for (size_t i = 0; i < world.traffic.size(); ++i) {
      const TrafficCar& car = world.traffic[i];
      double gap = kUnboundedGap, lead_speed = 0.0;
      double a;
      if (sim_detail::leader_ahead(world, sc, i, frame_of(car.state.lane_id), &gap, &lead_speed))
        a = idm_acceleration(car.state.speed, gap, lead_speed, car.params);
      else
        a = idm_acceleration(car.state.speed, kUnboundedGap, 0.0, car.params);
      accels[i] = krauss_perturb(a, car.params.imperfection, world.rng);
    }
  }

  for (size_t i = 0; i < world.traffic.size(); ++i) {
    TrafficCar& car = world.traffic[i];
    const double v0 = car.state.speed;
    double v1 = std::clamp(v0 + accels[i] * sc.dt, 0.0, car.params.desired_speed);
    if (!sc.traffic_can_decelerate) v1 = v0;
    car.arc += v1 * sc.dt;
    car.accel = (v1 - v0) / sc.dt;
    car.state.speed = v1;
    if (car.accel < kBrakingThreshold) world.braking_seconds += sc.dt;
  }

  // Remove exited cars, keeping order.
  std::vector<TrafficCar> kept;
  kept.reserve(world.traffic.size());
  for (auto& car : world.traffic) {
    const LaneFrame& f = frame_of(car.state.lane_id);
    if (car.arc <= f.length) {
      car.state.position = f.origin + f.dir * car.arc;
      kept.push_back(car);
    }
  }
  world.traffic = std::move(kept);

  spawn_traffic(world, sc, world.rng);
}

}  // namespace sim_detail

// Builds the initial world: ego stopped at the stop line, traffic pre-rolled
// through the warm-up so the road is already flowing at step 0.
inline WorldState init_world(const Scenario& sc, uint64_t seed, bool ego_present = true) {
  WorldState world;
  world.rng = Rng(seed);
  world.ego_present = ego_present;
  world.ego.position = sc.ego_path.point_at(0.0);
  world.ego.heading = wrap_angle(sc.ego_path.heading_at(0.0));
  world.ego.speed = 0.0;
  world.ego.length = sc.car_length;
  world.ego.width = sc.car_width;
  world.ego.is_ego = true;
  world.pending_spawns.assign(sc.lanes.size(), 0);
  if (sc.occluder_spec) {
    world.occluders = sample_occluders(world.rng, *sc.occluder_spec);
  }
  for (int i = 0; i < sc.warmup_steps; ++i) sim_detail::advance_traffic(world, sc);
  return world;
}

// One simulator step: traffic follows IDM (or holds speed), the ego
// integrates the commanded acceleration along its path, then events are
// evaluated in the order Collision > GoalReached > Timeout.
inline EventKind advance(WorldState& world, double ego_accel_command, const Scenario& sc) {
  if (world.phase == Phase::Done)
    throw std::logic_error("advance: episode already terminated");

  sim_detail::advance_traffic(world, sc);

  if (world.ego_present) {
    const double cmd = std::clamp(ego_accel_command, -4.5, 2.5);
    const double v0 = world.ego.speed;
    const double v1 = std::clamp(v0 + cmd * sc.dt, 0.0, sc.speed_limit);
    world.ego_arc += v1 * sc.dt;
    world.ego.speed = v1;
    world.ego_accel = (v1 - v0) / sc.dt;
    world.ego.position = sc.ego_path.point_at(world.ego_arc);
    world.ego.heading = wrap_angle(sc.ego_path.heading_at(world.ego_arc));
  }

  world.step += 1;

  EventKind event = EventKind::None;
  if (world.ego_present && check_collision(world.ego, world.traffic))
    event = EventKind::Collision;
  else if (world.ego_present && world.ego_arc >= sc.ego_path.length())
    event = EventKind::GoalReached;
  else if (world.step >= sc.max_steps)
    event = EventKind::Timeout;

  if (event != EventKind::None) world.phase = Phase::Done;
  return event;
}

// Per-step trace row; vehicle id 0 is the ego.
struct TraceRow {
  int step = 0;
  int vehicle_id = 0;
  double x = 0.0, y = 0.0, heading = 0.0, speed = 0.0, accel = 0.0;
};

using EpisodeTrace = std::vector<TraceRow>;

inline void record_trace(EpisodeTrace& trace, const WorldState& world) {
  if (world.ego_present) {
    trace.push_back({world.step, 0, world.ego.position.x, world.ego.position.y,
                     world.ego.heading, world.ego.speed, world.ego_accel});
  }
  for (const auto& car : world.traffic) {
    trace.push_back({world.step, car.id, car.state.position.x, car.state.position.y,
                     car.state.heading, car.state.speed, car.accel});
  }
}

// Total seconds of traffic braking (accel below threshold) in a recorded
// trajectory; the ego is excluded.
inline double braking_time(const EpisodeTrace& trace, double dt) {
  double total = 0.0;
  for (const auto& row : trace) {
    if (row.vehicle_id != 0 && row.accel < kBrakingThreshold) total += dt;
  }
  return total;
}

}  // namespace junction
