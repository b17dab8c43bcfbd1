#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "retrial/errors.hpp"

namespace retrial {

// End-effector pose used both as proprioceptive state and as the action
// space: absolute (x, y) target plus gripper aperture (0 closed, 1 open).
struct ProprioPoint {
  double x = 0.0;
  double y = 0.0;
  double gripper = 1.0;
};

inline bool proprio_valid(const ProprioPoint& p) {
  auto in01 = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return in01(p.x) && in01(p.y) && in01(p.gripper);
}

inline void validate_proprio(const ProprioPoint& p) {
  if (!proprio_valid(p)) throw ValidationError("proprio point outside [0,1]^3 or non-finite");
}

inline constexpr int kObsDim = 15;

// Flat observed-state vector. Layout:
//   [0..1]  end-effector x, y
//   [2]     gripper aperture
//   [3..5]  object pose x, y, theta
//   [6]     attached flag (0 or 1)
//   [7..14] world positions of the four affordances (x, y each)
// Hidden scenario parameters (blocked flags, slip probabilities) never
// appear here.
using Observation = std::array<double, kObsDim>;

namespace obs_idx {
inline constexpr int kEEX = 0;
inline constexpr int kEEY = 1;
inline constexpr int kGripper = 2;
inline constexpr int kObjX = 3;
inline constexpr int kObjY = 4;
inline constexpr int kObjTheta = 5;
inline constexpr int kAttached = 6;
inline constexpr int kAffordBase = 7;  // 4 pairs of (x, y)
}  // namespace obs_idx

inline void validate_observation(const Observation& o) {
  for (double v : o) {
    if (!std::isfinite(v)) throw ValidationError("observation has non-finite entry");
  }
}

inline constexpr int kMaxChunkLen = 24;

// A sequence of absolute proprio targets sampled as one unit and executed
// open-loop.
struct ActionChunk {
  std::vector<ProprioPoint> targets;

  int length() const { return static_cast<int>(targets.size()); }
};

inline void validate_chunk(const ActionChunk& c) {
  if (c.targets.empty() || c.length() > kMaxChunkLen)
    throw ValidationError("action chunk length outside [1, 24]");
}

enum class Event : std::uint8_t {
  GraspAttach = 0,
  GraspFailBlocked = 1,
  Slip = 2,
  Success = 3,
};

struct EventSet {
  std::uint8_t bits = 0;

  void add(Event e) { bits |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(e)); }
  bool has(Event e) const { return bits & (1u << static_cast<unsigned>(e)); }
  bool empty() const { return bits == 0; }
};

// Per-affordance hidden dynamics parameters: whether attachment is silently
// impossible, and the per-carry-step probability of losing the grasp.
struct AffordanceParam {
  bool blocked = false;
  double slip_prob = 0.0;
};

inline constexpr int kNumAffordances = 4;

// The unobserved scenario variable sampled once per episode. The offset
// scale is sampled here too (held-out geometry variation) but is observable
// through the affordance positions; only blocked/slip stay invisible.
struct HiddenParam {
  std::array<AffordanceParam, kNumAffordances> affordances{};
  double offset_scale_x = 1.0;
  double offset_scale_y = 1.0;
};

struct Transition {
  Observation obs{};
  ProprioPoint proprio;  // end-effector state at obs
  ProprioPoint action;   // executed absolute target
  double reward = -1.0;
  int t = 0;
  EventSet events;
};

struct Trajectory {
  std::vector<Transition> transitions;
  bool success = false;
  HiddenParam hidden_record;  // metadata only, never a training feature

  int length() const { return static_cast<int>(transitions.size()); }
};

// Checks the structural invariants: contiguous step indices and, on
// success, a final transition with reward 0 and the Success tag.
inline void validate_trajectory(const Trajectory& traj) {
  for (int i = 0; i < traj.length(); ++i) {
    if (traj.transitions[i].t != i) throw ValidationError("trajectory step indices not contiguous");
  }
  if (traj.success) {
    if (traj.transitions.empty()) throw ValidationError("successful trajectory with no transitions");
    const Transition& last = traj.transitions.back();
    if (last.reward != 0.0 || !last.events.has(Event::Success))
      throw ValidationError("successful trajectory must end with reward 0 and Success event");
  }
}

}  // namespace retrial
