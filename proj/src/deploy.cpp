#include "retrial/deploy.hpp"

#include <cmath>

namespace retrial {

int interval_period(double mean_expert_length, double buffer) {
  if (!(mean_expert_length > 0.0)) throw ConfigError("interval_period: mean expert length must be > 0");
  if (buffer < 0.0) throw ConfigError("interval_period: buffer must be >= 0");
  return static_cast<int>(std::lround((1.0 + buffer) * mean_expert_length));
}

EpisodeResult run_episode(const ScenarioConfig& scenario, const RetrievalPolicy& policy,
                          const ValueModel* model, const DeployConfig& cfg,
                          SeedStream& scenario_rng, SeedStream& dynamics_rng,
                          SeedStream& policy_rng) {
  if (cfg.horizon < 1) throw ConfigError("deploy: horizon must be >= 1");
  if (cfg.max_recoveries < 0) throw ConfigError("deploy: max recoveries must be >= 0");
  if (cfg.monitor_enabled && cfg.interval_period)
    throw ConfigError("deploy: monitor and interval recovery are mutually exclusive");
  if (cfg.interval_period && *cfg.interval_period < 1)
    throw ConfigError("deploy: interval period must be >= 1");
  if (cfg.execute_len < 1 || cfg.execute_len > policy.params().chunk_len)
    throw ConfigError("deploy: execute length outside [1, chunk length]");
  if (cfg.skew.n_skew < 1) throw ConfigError("deploy: n_skew must be >= 1");
  if (cfg.monitor_enabled) {
    if (!model) throw ConfigError("deploy: monitor enabled but no value model");
    if (model->in_dim != kObsDim) throw ConfigError("deploy: value model input dimension mismatch");
    if (model->backend != cfg.monitor.backend)
      throw ConfigError("deploy: value model backend does not match monitor");
    validate_config(cfg.monitor);
  }

  WorldState state = reset(scenario, scenario_rng);

  EpisodeResult result;
  result.hidden = state.hidden;
  result.initial_obs = observe(scenario, state);

  AvoidanceSet avoid;
  ValueHistory history;
  int attempt_steps = 0;  // executed steps since the last recovery

  auto do_recovery = [&](bool record_point, const ProprioPoint& point) {
    if (record_point) {
      record_avoid(avoid, point);
    }
    run_recovery(scenario, state);
    ++result.recoveries;
    result.recovery_steps.push_back(result.steps);
    result.attempt_lengths.push_back(attempt_steps);
    attempt_steps = 0;
    history.clear();
  };

  while (!state.terminal && result.steps < cfg.horizon) {
    const Observation obs = observe(scenario, state);
    std::vector<ActionChunk> chunks;
    chunks.reserve(cfg.skew.n_skew);
    for (int i = 0; i < cfg.skew.n_skew; ++i) chunks.push_back(policy.sample_chunk(obs, policy_rng));
    auto [chunk, chunk_idx] = skewed_select(chunks, avoid);
    (void)chunk_idx;

    for (int j = 0; j < cfg.execute_len && result.steps < cfg.horizon; ++j) {
      const ProprioPoint prev_proprio = state.ee;  // s_{t-1} in proprio space
      const StepOutcome oc = step(scenario, state, chunk.targets[j], dynamics_rng);
      ++result.steps;
      ++attempt_steps;

      if (oc.events.has(Event::GraspAttach) || oc.events.has(Event::GraspFailBlocked))
        result.grasp_attempts.push_back({state.ee.x, state.ee.y});

      if (oc.done) {
        result.success = oc.events.has(Event::Success);
        break;
      }

      if (cfg.monitor_enabled) {
        const ProgressVerdict verdict =
            observe_and_judge(history, *model, oc.obs, oc.reward, cfg.monitor);
        if (verdict.ready && verdict.triggered && result.recoveries < cfg.max_recoveries) {
          do_recovery(true, prev_proprio);
          break;  // abandon the rest of the condemned chunk
        }
      } else if (cfg.interval_period) {
        if (attempt_steps >= *cfg.interval_period && result.recoveries < cfg.max_recoveries) {
          do_recovery(false, prev_proprio);
          break;
        }
      }
    }
  }

  result.avoid_points = avoid.points;
  result.trace = history.trace();
  return result;
}

}  // namespace retrial
