#pragma once

#include <array>
#include <string>

#include "retrial/rng.hpp"
#include "retrial/types.hpp"

namespace retrial {

enum class Variant { train, blocked, adversarial_slip, held_out };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;
};

// Scenario geometry and kinematic limits. Everything here is observable;
// the hidden per-affordance parameters live in HiddenParam.
struct ScenarioConfig {
  Variant variant = Variant::train;
  Box placement{0.30, 0.08, 0.70, 0.45};
  std::array<std::array<double, 2>, kNumAffordances> affordance_offsets{
      {{0.06, 0.0}, {-0.06, 0.0}, {0.0, 0.06}, {0.0, -0.06}}};
  std::array<double, 2> goal_center{0.5, 0.9};
  double goal_radius = 0.05;
  double grasp_radius = 0.03;
  double v_max = 0.05;  // maximum end-effector travel per step
  ProprioPoint home{0.5, 0.95, 1.0};

  std::string to_json() const;
  static ScenarioConfig from_json(const std::string& text);
};

void validate_config(const ScenarioConfig& cfg);

struct WorldState {
  ProprioPoint ee;
  double obj_x = 0.0;
  double obj_y = 0.0;
  double obj_theta = 0.0;
  bool attached = false;
  int attached_affordance = -1;
  HiddenParam hidden;
  int step_count = 0;
  int recovery_count = 0;
  bool terminal = false;
};

struct StepOutcome {
  Observation obs{};
  double reward = -1.0;
  bool done = false;
  EventSet events;
};

struct RecoveryOutcome {
  int steps_used = 0;  // simulator ticks; these never advance step_count
};

// Samples the hidden variable for the episode. Rejection enforces that at
// least one affordance is unblocked with slip_prob <= 0.05.
HiddenParam sample_hidden(Variant variant, SeedStream& rng);

// Fresh episode: end-effector at home, object placed uniformly in the
// placement region with random orientation, hidden parameter resampled.
WorldState reset(const ScenarioConfig& cfg, SeedStream& rng);

// World positions of the four affordances for the current object pose,
// including the per-axis offset scale.
std::array<std::array<double, 2>, kNumAffordances> affordance_positions(const ScenarioConfig& cfg,
                                                                        const WorldState& state);

// Deterministic 15-feature projection of the state; never reads blocked
// flags or slip probabilities.
Observation observe(const ScenarioConfig& cfg, const WorldState& state);

// One dynamics step toward an absolute target. The rng resolves slip rolls
// only.
StepOutcome step(const ScenarioConfig& cfg, WorldState& state, const ProprioPoint& target,
                 SeedStream& rng);

// Opens the gripper (dropping any attachment where it is) and drives the
// end-effector home in a straight line at v_max. The tick count is
// returned but does not advance the episode's step counter.
RecoveryOutcome run_recovery(const ScenarioConfig& cfg, WorldState& state);

}  // namespace retrial
