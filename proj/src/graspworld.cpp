#include "retrial/graspworld.hpp"

#include <cmath>

#include <json.hpp>

namespace retrial {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist2d(double ax, double ay, double bx, double by) {
  return std::hypot(ax - bx, ay - by);
}

bool inside_unit_square(double x, double y) { return x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0; }

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::train: return "train";
    case Variant::blocked: return "blocked";
    case Variant::adversarial_slip: return "adversarial_slip";
    case Variant::held_out: return "held_out";
  }
  throw ValidationError("unknown variant value");
}

Variant variant_from_string(const std::string& s) {
  if (s == "train") return Variant::train;
  if (s == "blocked") return Variant::blocked;
  if (s == "adversarial_slip") return Variant::adversarial_slip;
  if (s == "held_out") return Variant::held_out;
  throw ValidationError("unknown variant name: " + s);
}

void validate_config(const ScenarioConfig& cfg) {
  if (!inside_unit_square(cfg.placement.x_min, cfg.placement.y_min) ||
      !inside_unit_square(cfg.placement.x_max, cfg.placement.y_max) ||
      cfg.placement.x_min > cfg.placement.x_max || cfg.placement.y_min > cfg.placement.y_max)
    throw ConfigError("placement region must be a box inside [0,1]^2");
  if (!inside_unit_square(cfg.goal_center[0] - cfg.goal_radius, cfg.goal_center[1] - cfg.goal_radius) ||
      !inside_unit_square(cfg.goal_center[0] + cfg.goal_radius, cfg.goal_center[1] + cfg.goal_radius))
    throw ConfigError("goal region must lie inside [0,1]^2");
  if (cfg.goal_radius <= 0.0 || cfg.grasp_radius <= 0.0 || cfg.v_max <= 0.0)
    throw ConfigError("radii and v_max must be positive");
  validate_proprio(cfg.home);
}

std::string ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  j["placement_region"] = {{"x_min", placement.x_min},
                           {"y_min", placement.y_min},
                           {"x_max", placement.x_max},
                           {"y_max", placement.y_max}};
  nlohmann::json offs = nlohmann::json::array();
  for (const auto& o : affordance_offsets) offs.push_back({o[0], o[1]});
  j["affordance_offsets"] = offs;
  j["goal_center"] = {goal_center[0], goal_center[1]};
  j["goal_radius"] = goal_radius;
  j["grasp_radius"] = grasp_radius;
  j["v_max"] = v_max;
  j["home"] = {home.x, home.y, home.gripper};
  return j.dump();
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario config: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    cfg.variant = variant_from_string(j.at("variant").get<std::string>());
    if (j.contains("placement_region")) {
      const auto& p = j.at("placement_region");
      cfg.placement = {p.at("x_min").get<double>(), p.at("y_min").get<double>(),
                       p.at("x_max").get<double>(), p.at("y_max").get<double>()};
    }
    if (j.contains("affordance_offsets")) {
      const auto& offs = j.at("affordance_offsets");
      if (offs.size() != kNumAffordances) throw ParseError("scenario config: need 4 affordance offsets");
      for (int i = 0; i < kNumAffordances; ++i)
        cfg.affordance_offsets[i] = {offs[i][0].get<double>(), offs[i][1].get<double>()};
    }
    if (j.contains("goal_center"))
      cfg.goal_center = {j["goal_center"][0].get<double>(), j["goal_center"][1].get<double>()};
    if (j.contains("goal_radius")) cfg.goal_radius = j["goal_radius"].get<double>();
    if (j.contains("grasp_radius")) cfg.grasp_radius = j["grasp_radius"].get<double>();
    if (j.contains("v_max")) cfg.v_max = j["v_max"].get<double>();
    if (j.contains("home"))
      cfg.home = {j["home"][0].get<double>(), j["home"][1].get<double>(), j["home"][2].get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

HiddenParam sample_hidden(Variant variant, SeedStream& rng) {
  // Rejection keeps at least one affordance unblocked with slip <= 0.05.
  // The variant rules below already guarantee that, but the guard stays as
  // the contract.
  for (int tries = 0; tries < 1000; ++tries) {
    HiddenParam h;
    switch (variant) {
      case Variant::train:
        for (auto& a : h.affordances) a = {false, rng.uniform(0.0, 0.02)};
        break;
      case Variant::blocked: {
        for (auto& a : h.affordances) a = {false, rng.uniform(0.0, 0.02)};
        const int first = static_cast<int>(rng.uniform_int(kNumAffordances));
        int second = static_cast<int>(rng.uniform_int(kNumAffordances - 1));
        if (second >= first) ++second;
        h.affordances[first].blocked = true;
        h.affordances[second].blocked = true;
        break;
      }
      case Variant::adversarial_slip: {
        const int good = static_cast<int>(rng.uniform_int(kNumAffordances));
        for (int i = 0; i < kNumAffordances; ++i) {
          h.affordances[i] = {false, i == good ? rng.uniform(0.0, 0.02) : rng.uniform(0.2, 0.4)};
        }
        break;
      }
      case Variant::held_out:
        for (auto& a : h.affordances) a = {false, rng.uniform(0.0, 0.02)};
        h.offset_scale_x = rng.uniform(0.7, 1.3);
        h.offset_scale_y = rng.uniform(0.7, 1.3);
        break;
    }
    for (const auto& a : h.affordances) {
      if (!a.blocked && a.slip_prob <= 0.05) return h;
    }
  }
  throw ConfigError("sample_hidden: could not satisfy solvability invariant");
}

WorldState reset(const ScenarioConfig& cfg, SeedStream& rng) {
  validate_config(cfg);
  WorldState s;
  s.ee = cfg.home;
  s.ee.gripper = cfg.home.gripper >= 0.5 ? 1.0 : 0.0;
  s.obj_x = rng.uniform(cfg.placement.x_min, cfg.placement.x_max);
  s.obj_y = rng.uniform(cfg.placement.y_min, cfg.placement.y_max);
  s.obj_theta = rng.uniform(0.0, 2.0 * kPi);
  s.hidden = sample_hidden(cfg.variant, rng);
  return s;
}

std::array<std::array<double, 2>, kNumAffordances> affordance_positions(const ScenarioConfig& cfg,
                                                                        const WorldState& state) {
  std::array<std::array<double, 2>, kNumAffordances> out;
  const double c = std::cos(state.obj_theta);
  const double s = std::sin(state.obj_theta);
  for (int i = 0; i < kNumAffordances; ++i) {
    const double ox = cfg.affordance_offsets[i][0] * state.hidden.offset_scale_x;
    const double oy = cfg.affordance_offsets[i][1] * state.hidden.offset_scale_y;
    out[i] = {state.obj_x + c * ox - s * oy, state.obj_y + s * ox + c * oy};
  }
  return out;
}

Observation observe(const ScenarioConfig& cfg, const WorldState& state) {
  Observation o{};
  o[obs_idx::kEEX] = state.ee.x;
  o[obs_idx::kEEY] = state.ee.y;
  o[obs_idx::kGripper] = state.ee.gripper;
  o[obs_idx::kObjX] = state.obj_x;
  o[obs_idx::kObjY] = state.obj_y;
  o[obs_idx::kObjTheta] = state.obj_theta;
  o[obs_idx::kAttached] = state.attached ? 1.0 : 0.0;
  const auto affords = affordance_positions(cfg, state);
  for (int i = 0; i < kNumAffordances; ++i) {
    o[obs_idx::kAffordBase + 2 * i] = affords[i][0];
    o[obs_idx::kAffordBase + 2 * i + 1] = affords[i][1];
  }
  return o;
}

StepOutcome step(const ScenarioConfig& cfg, WorldState& state, const ProprioPoint& target,
                 SeedStream& rng) {
  if (state.terminal) throw UsageError("step: episode already terminal");
  validate_proprio(target);

  const bool was_attached = state.attached;

  // Straight-line motion clamped to v_max.
  const double dx = target.x - state.ee.x;
  const double dy = target.y - state.ee.y;
  const double d = std::hypot(dx, dy);
  if (d > cfg.v_max) {
    state.ee.x += dx / d * cfg.v_max;
    state.ee.y += dy / d * cfg.v_max;
  } else {
    state.ee.x = target.x;
    state.ee.y = target.y;
  }

  StepOutcome out;

  // Attached object tracks the end-effector: the grasped affordance point
  // coincides with the gripper.
  auto track_object = [&]() {
    const auto affords = affordance_positions(cfg, state);
    state.obj_x += state.ee.x - affords[state.attached_affordance][0];
    state.obj_y += state.ee.y - affords[state.attached_affordance][1];
  };
  if (state.attached) track_object();

  // Binary gripper; attachment only on an open -> closed transition.
  const double new_grip = target.gripper >= 0.5 ? 1.0 : 0.0;
  if (new_grip != state.ee.gripper) {
    if (new_grip == 0.0) {
      const auto affords = affordance_positions(cfg, state);
      int nearest = -1;
      double best = cfg.grasp_radius;
      for (int i = 0; i < kNumAffordances; ++i) {
        const double di = dist2d(state.ee.x, state.ee.y, affords[i][0], affords[i][1]);
        if (di <= best) {
          best = di;
          nearest = i;
        }
      }
      if (nearest >= 0) {
        if (state.hidden.affordances[nearest].blocked) {
          out.events.add(Event::GraspFailBlocked);
        } else {
          state.attached = true;
          state.attached_affordance = nearest;
          track_object();  // snap the affordance point onto the gripper
          out.events.add(Event::GraspAttach);
        }
      }
    } else if (state.attached) {
      state.attached = false;
      state.attached_affordance = -1;
    }
    state.ee.gripper = new_grip;
  }

  // Carry steps may lose the grasp; the object stays where it was dropped.
  if (was_attached && state.attached) {
    if (rng.uniform() < state.hidden.affordances[state.attached_affordance].slip_prob) {
      state.attached = false;
      state.attached_affordance = -1;
      out.events.add(Event::Slip);
    }
  }

  if (state.attached &&
      dist2d(state.ee.x, state.ee.y, cfg.goal_center[0], cfg.goal_center[1]) <= cfg.goal_radius) {
    out.events.add(Event::Success);
    out.reward = 0.0;
    out.done = true;
    state.terminal = true;
  } else {
    out.reward = -1.0;
    out.done = false;
  }

  ++state.step_count;
  out.obs = observe(cfg, state);
  return out;
}

RecoveryOutcome run_recovery(const ScenarioConfig& cfg, WorldState& state) {
  if (state.attached) {
    state.attached = false;
    state.attached_affordance = -1;
  }
  state.ee.gripper = 1.0;

  // Straight line home at v_max; count the ticks analytically so a
  // floating-point hair above a multiple of v_max does not cost a tick.
  RecoveryOutcome out;
  const double d = dist2d(state.ee.x, state.ee.y, cfg.home.x, cfg.home.y);
  out.steps_used = d <= 1e-12 ? 0 : static_cast<int>(std::ceil(d / cfg.v_max - 1e-9));
  state.ee.x = cfg.home.x;
  state.ee.y = cfg.home.y;
  ++state.recovery_count;
  return out;
}

}  // namespace retrial
