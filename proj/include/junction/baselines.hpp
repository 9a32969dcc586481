#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "junction/env.hpp"

namespace junction {

// Minimum constant-velocity time over approaching traffic to reach its
// conflict-zone entry. Cars inside or past their zone and cars on
// non-conflicting lanes do not contribute; +infinity when nothing approaches.
// `visible` (per traffic index) restricts the computation to perceived cars.
inline double min_ttc(const WorldState& world, const Scenario& sc,
                      const std::vector<char>* visible = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < world.traffic.size(); ++i) {
    if (visible != nullptr && !(*visible)[i]) continue;
    const TrafficCar& car = world.traffic[i];
    const ConflictZone* zone = nullptr;
    for (const auto& z : sc.conflict_zones) {
      if (z.lane_id == car.state.lane_id) {
        zone = &z;
        break;
      }
    }
    if (zone == nullptr) continue;
    const double front = car.arc + 0.5 * car.state.length;
    if (front >= zone->lane_entry) continue;  // inside or past the zone
    if (car.state.speed < 0.05) continue;     // not approaching
    best = std::min(best, (zone->lane_entry - front) / car.state.speed);
  }
  return best;
}

// True iff any perceived car footprint currently overlaps its conflict zone.
inline bool conflict_zone_occupied(const WorldState& world, const Scenario& sc,
                                   const std::vector<char>* visible = nullptr) {
  for (size_t i = 0; i < world.traffic.size(); ++i) {
    if (visible != nullptr && !(*visible)[i]) continue;
    const TrafficCar& car = world.traffic[i];
    for (const auto& z : sc.conflict_zones) {
      if (z.lane_id != car.state.lane_id) continue;
      const double front = car.arc + 0.5 * car.state.length;
      const double rear = car.arc - 0.5 * car.state.length;
      if (front >= z.lane_entry && rear <= z.lane_exit) return true;
    }
  }
  return false;
}

// True iff any grid cell lying on a conflict lane at or upstream of the zone
// exit is masked. This is the creep gate: the ego keeps creeping until the
// whole conflict approach is in view.
inline bool conflict_region_occluded(const VisibilityMask& mask, const WorldState& world,
                                     const Scenario& sc, const GridSpec& grid) {
  const Vec2 origin = sensor_origin(world.ego);
  const Vec2 fwd = heading_dir(world.ego.heading);
  const Vec2 left{-fwd.y, fwd.x};
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (mask.at(r, c)) continue;
      const Vec2 rel = cell_center(r, c, grid);
      const Vec2 pos = origin + fwd * rel.x + left * rel.y;
      for (const auto& z : sc.conflict_zones) {
        const LanePath* lane = nullptr;
        for (const auto& l : sc.lanes) {
          if (l.id == z.lane_id) {
            lane = &l;
            break;
          }
        }
        if (lane == nullptr) continue;
        const double lane_y = lane->waypoints.front().y;
        if (std::abs(pos.y - lane_y) > scenario_detail::kLaneHalf) continue;
        const Vec2 d = lane->waypoints.back() - lane->waypoints.front();
        const Vec2 dir = d * (1.0 / d.norm());
        const double arc = (pos - lane->waypoints.front()).dot(dir);
        if (arc <= z.lane_exit) return true;
      }
    }
  }
  return false;
}

struct TtcPolicyParams {
  double threshold = 4.0;  // seconds
  bool creep_enabled = false;

  void validate() const {
    if (threshold <= 0.0) throw std::invalid_argument("TTC threshold must be > 0");
  }
};

enum class TtcAction { Wait, Creep, Go };

// The heuristic: go iff the minimum TTC clears the threshold and no perceived
// car sits in a conflict zone. With creeping enabled, creep while the conflict
// region is occluded (stopping short of the first conflict), then apply the rule.
inline TtcAction ttc_decide_action(const DecisionContext& ctx, const TtcPolicyParams& p) {
  if (p.creep_enabled && ctx.mask != nullptr) {
    if (conflict_region_occluded(*ctx.mask, ctx.world, ctx.scenario, ctx.grid)) {
      const double stop_at = ctx.scenario.first_conflict_ego_entry() - 0.3;
      return ctx.world.ego_arc < stop_at ? TtcAction::Creep : TtcAction::Wait;
    }
  }
  const double ttc = min_ttc(ctx.world, ctx.scenario, ctx.car_visible);
  const bool clear = !conflict_zone_occupied(ctx.world, ctx.scenario, ctx.car_visible);
  return (ttc >= p.threshold && clear) ? TtcAction::Go : TtcAction::Wait;
}

inline int ttc_action_to_index(TtcAction a, ActionSpaceKind space) {
  switch (space) {
    case ActionSpaceKind::TimeToGo5:
      if (a == TtcAction::Creep)
        throw std::logic_error("creep is not available in the time-to-go space");
      return a == TtcAction::Go ? 0 : 1;
    case ActionSpaceKind::CreepAndGo3:
      return a == TtcAction::Wait ? 0 : (a == TtcAction::Creep ? 1 : 2);
    case ActionSpaceKind::Sequential12:
      throw std::logic_error("the TTC baseline does not drive the sequential space");
  }
  throw std::logic_error("unreachable");
}

class TtcPolicy : public Policy {
 public:
  explicit TtcPolicy(TtcPolicyParams params) : params_(params) { params_.validate(); }

  int decide(const DecisionContext& ctx, Rng&) override {
    return ttc_action_to_index(ttc_decide_action(ctx, params_), ctx.space);
  }

  const TtcPolicyParams& params() const { return params_; }

 private:
  TtcPolicyParams params_;
};

// Uniform over the legal actions.
inline int random_decide(ActionSpaceKind space, Phase phase, Rng& rng) {
  const std::vector<int> legal = legal_actions(space, phase);
  if (legal.empty()) throw std::logic_error("random_decide: no legal actions");
  return legal[rng.uniform_int(static_cast<int>(legal.size()))];
}

class RandomPolicy : public Policy {
 public:
  int decide(const DecisionContext& ctx, Rng& rng) override {
    return random_decide(ctx.space, ctx.phase, rng);
  }
};

}  // namespace junction
