#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "junction/sim.hpp"

namespace junction {

constexpr double kAccelPrimitive = 2.5;   // m/s^2
constexpr double kDecelPrimitive = -4.5;  // m/s^2
constexpr double kCreepSpeed = 2.0;       // m/s
constexpr double kGoAccel = 2.5;          // m/s^2, held to the speed limit

enum class ActionSpaceKind { Sequential12, TimeToGo5, CreepAndGo3 };

inline int space_size(ActionSpaceKind kind) {
  switch (kind) {
    case ActionSpaceKind::Sequential12: return 12;
    case ActionSpaceKind::TimeToGo5: return 5;
    case ActionSpaceKind::CreepAndGo3: return 3;
  }
  return 0;
}

inline const char* to_string(ActionSpaceKind k) {
  switch (k) {
    case ActionSpaceKind::Sequential12: return "sequential";
    case ActionSpaceKind::TimeToGo5: return "time-to-go";
    case ActionSpaceKind::CreepAndGo3: return "creep";
  }
  return "?";
}

inline ActionSpaceKind space_from_string(const std::string& s) {
  if (s == "sequential") return ActionSpaceKind::Sequential12;
  if (s == "time-to-go") return ActionSpaceKind::TimeToGo5;
  if (s == "creep") return ActionSpaceKind::CreepAndGo3;
  throw std::invalid_argument("unknown action space: " + s);
}

enum class Primitive { Accelerate, Decelerate, Maintain, HoldStop, Creep, Go };

// A decoded action: a speed-control primitive applied for `repeat` simulator
// steps without re-querying the policy. commit marks the irreversible go.
struct EgoCommand {
  Primitive primitive = Primitive::HoldStop;
  int repeat = 1;
  bool commit = false;
};

// Pinned index orderings (checkpoints depend on them):
//   Sequential12: index = primitive*4 + log2(repeat), primitives ordered
//                 accelerate, decelerate, maintain; repeats 1,2,4,8.
//   TimeToGo5:    0 = go; 1..4 = wait at repeats 1,2,4,8.
//   CreepAndGo3:  0 = wait, 1 = creep, 2 = go.
inline EgoCommand decode(int index, ActionSpaceKind kind, Phase phase) {
  if (phase == Phase::Committed || phase == Phase::Done)
    throw std::logic_error("decode: no actions are legal after commit/termination");
  if (index < 0 || index >= space_size(kind))
    throw std::invalid_argument("decode: action index out of range");
  switch (kind) {
    case ActionSpaceKind::Sequential12: {
      static const Primitive prims[3] = {Primitive::Accelerate, Primitive::Decelerate,
                                         Primitive::Maintain};
      return {prims[index / 4], 1 << (index % 4), false};
    }
    case ActionSpaceKind::TimeToGo5: {
      if (index == 0) return {Primitive::Go, 1, true};
      return {Primitive::HoldStop, 1 << (index - 1), false};
    }
    case ActionSpaceKind::CreepAndGo3: {
      if (index == 0) return {Primitive::HoldStop, 1, false};
      if (index == 1) return {Primitive::Creep, 1, false};
      return {Primitive::Go, 1, true};
    }
  }
  throw std::logic_error("decode: unreachable");
}

inline std::vector<int> legal_actions(ActionSpaceKind kind, Phase phase) {
  if (phase == Phase::Committed || phase == Phase::Done) return {};
  std::vector<int> all(space_size(kind));
  for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
  return all;
}

// Per-step acceleration realizing a primitive given the current ego speed.
inline double command_accel(Primitive p, double speed, double dt) {
  switch (p) {
    case Primitive::Accelerate: return kAccelPrimitive;
    case Primitive::Decelerate: return kDecelPrimitive;
    case Primitive::Maintain: return 0.0;
    case Primitive::HoldStop:
      return speed > 0.0 ? std::max(kDecelPrimitive, -speed / dt) : 0.0;
    case Primitive::Creep:
      return std::clamp((kCreepSpeed - speed) / dt, kDecelPrimitive, kAccelPrimitive);
    case Primitive::Go: return kGoAccel;
  }
  return 0.0;
}

}  // namespace junction
