#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "junction/actions.hpp"
#include "junction/encoder.hpp"
#include "junction/sim.hpp"

namespace junction {

// Reward composition: -0.01 per simulator step, +1 on reaching the goal,
// -10 on a collision, nothing extra on timeout.
inline double reward_for_step(EventKind e) {
  double r = -0.01;
  if (e == EventKind::GoalReached) r += 1.0;
  if (e == EventKind::Collision) r += -10.0;
  return r;
}

struct StepOutcome {
  std::vector<float> obs;
  double reward = 0.0;
  bool terminal = false;
  EventKind event = EventKind::None;
  int sim_steps = 0;  // simulator steps consumed by this decision
};

// Decision-level environment: one step() spans a full frame-skip repeat (and,
// after a committed go, rolls to the end of the episode).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual int obs_size() const = 0;
  virtual int action_count() const = 0;
  virtual std::vector<float> reset(uint64_t seed) = 0;
  virtual std::vector<int> legal_actions() const = 0;
  virtual StepOutcome step(int action) = 0;
  virtual bool terminal() const = 0;
};

inline EncoderConfig encoder_for(ActionSpaceKind kind, bool occlusion_aware) {
  EncoderConfig cfg;
  cfg.grid = kind == ActionSpaceKind::Sequential12 ? make_grid_5x11() : make_grid_18x26();
  cfg.include_ttc = kind == ActionSpaceKind::Sequential12;
  cfg.include_occlusion = occlusion_aware;
  return cfg;
}

// What a policy sees when asked for a decision. Baseline policies read the
// world directly; learned policies read the encoded observation.
struct DecisionContext {
  const WorldState& world;
  const Scenario& scenario;
  const std::vector<float>& obs;
  const VisibilityMask* mask = nullptr;          // null when the scenario has no occluders
  const std::vector<char>* car_visible = nullptr;  // per traffic index
  ActionSpaceKind space = ActionSpaceKind::TimeToGo5;
  Phase phase = Phase::Waiting;
  GridSpec grid;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual int decide(const DecisionContext& ctx, Rng& rng) = 0;
};

class IntersectionEnv : public Environment {
 public:
  IntersectionEnv(Scenario scenario, ActionSpaceKind kind, EncoderConfig cfg)
      : sc_(std::move(scenario)), kind_(kind), cfg_(cfg) {}

  int obs_size() const override { return cfg_.grid.rows * cfg_.grid.cols * cfg_.channels(); }
  int action_count() const override { return space_size(kind_); }
  bool terminal() const override { return terminal_; }

  std::vector<float> reset(uint64_t seed) override {
    world_ = init_world(sc_, seed);
    terminal_ = false;
    last_event_ = EventKind::None;
    decision_rewards_.clear();
    if (trace_) {
      trace_->clear();
      record_trace(*trace_, world_);
    }
    refresh_observation();
    return obs_;
  }

  std::vector<int> legal_actions() const override { return junction::legal_actions(kind_, world_.phase); }

  StepOutcome step(int action) override {
    if (terminal_) throw std::logic_error("IntersectionEnv::step after terminal");
    const EgoCommand cmd = decode(action, kind_, world_.phase);
    if (cmd.commit) world_.phase = Phase::Committed;

    StepOutcome out;
    do {
      for (int k = 0; k < cmd.repeat && !terminal_; ++k) {
        const double a = command_accel(cmd.primitive, world_.ego.speed, sc_.dt);
        const EventKind ev = advance(world_, a, sc_);
        if (trace_) record_trace(*trace_, world_);
        out.reward += reward_for_step(ev);
        out.sim_steps += 1;
        if (ev != EventKind::None) {
          terminal_ = true;
          last_event_ = ev;
        }
      }
    } while (cmd.commit && !terminal_);

    if (!cmd.commit && !terminal_) {
      world_.phase = (world_.ego_arc > 0.0 || world_.ego.speed > 0.0) ? Phase::Creeping
                                                                      : Phase::Waiting;
    }

    decision_rewards_.push_back(out.reward);
    if (terminal_) {
      obs_.assign(static_cast<size_t>(obs_size()), 0.0f);
    } else {
      refresh_observation();
    }
    out.obs = obs_;
    out.terminal = terminal_;
    out.event = last_event_;
    return out;
  }

  DecisionContext context() const {
    return {world_, sc_,          obs_,  mask_ ? &*mask_ : nullptr,
            &car_visible_, kind_, world_.phase, cfg_.grid};
  }

  const Scenario& scenario() const { return sc_; }
  const WorldState& world() const { return world_; }
  EventKind event() const { return last_event_; }
  int sim_steps() const { return world_.step; }
  double episode_seconds() const { return world_.step * sc_.dt; }
  double braking_seconds() const { return world_.braking_seconds; }
  const std::vector<double>& decision_rewards() const { return decision_rewards_; }
  void set_trace(EpisodeTrace* trace) { trace_ = trace; }
  const VisibilityMask* mask() const { return mask_ ? &*mask_ : nullptr; }

 private:
  void refresh_observation() {
    if (sc_.occluder_spec) {
      mask_ = compute_visibility(sensor_origin(world_.ego), world_.ego.heading, world_.occluders,
                                 cfg_.grid);
    } else {
      mask_.reset();
    }
    car_visible_.assign(world_.traffic.size(), 1);
    if (mask_) {
      const Vec2 origin = sensor_origin(world_.ego);
      for (size_t i = 0; i < world_.traffic.size(); ++i) {
        const Vec2 rel = into_frame(world_.traffic[i].state.position - origin, world_.ego.heading);
        const auto cell = cell_index(rel, cfg_.grid);
        car_visible_[i] = (cell && mask_->at(cell->first, cell->second)) ? 1 : 0;
      }
    }
    const StateTensor t = encode(world_, sc_, cfg_, mask_ ? &*mask_ : nullptr);
    obs_ = t.data;
  }

  Scenario sc_;
  ActionSpaceKind kind_;
  EncoderConfig cfg_;
  WorldState world_;
  std::optional<VisibilityMask> mask_;
  std::vector<char> car_visible_;
  std::vector<float> obs_;
  std::vector<double> decision_rewards_;
  bool terminal_ = true;
  EventKind last_event_ = EventKind::None;
  EpisodeTrace* trace_ = nullptr;
};

}  // namespace junction
