#pragma once

#include <optional>
#include <vector>

#include "retrial/graspworld.hpp"
#include "retrial/monitor.hpp"
#include "retrial/policy.hpp"

namespace retrial {

// Deployment-time loop configuration. Exactly one of {monitor,
// interval period, neither} drives recoveries.
struct DeployConfig {
  int horizon = 400;        // executed policy steps; recovery ticks excluded
  int max_recoveries = 20;
  int execute_len = 16;     // chunk prefix executed before re-sampling
  MonitorConfig monitor;
  SkewConfig skew;
  bool monitor_enabled = true;
  std::optional<int> interval_period;  // fixed-period recovery baseline
};

struct EpisodeResult {
  bool success = false;
  int steps = 0;  // executed policy steps, recovery excluded
  int recoveries = 0;
  std::vector<int> recovery_steps;          // global step index at each recovery
  std::vector<int> attempt_lengths;         // executed steps of each recovered attempt
  std::vector<std::array<double, 2>> grasp_attempts;  // ee position at attach/fail events
  std::vector<ProprioPoint> avoid_points;
  std::vector<TraceRow> trace;
  HiddenParam hidden;       // metadata for matched-pair checks
  Observation initial_obs{};
};

// Buffered-expert period for the interval-recovery baseline:
// round((1 + buffer) * T-bar).
int interval_period(double mean_expert_length, double buffer = 0.25);

// One closed-loop episode: sample n_skew chunks, pick the one farthest from
// past mistakes, execute step by step while monitoring, recover and record
// the pre-trigger proprio on a trigger, stop on success / horizon /
// nothing-left-to-try. The model may be null when the monitor is disabled.
EpisodeResult run_episode(const ScenarioConfig& scenario, const RetrievalPolicy& policy,
                          const ValueModel* model, const DeployConfig& cfg,
                          SeedStream& scenario_rng, SeedStream& dynamics_rng,
                          SeedStream& policy_rng);

}  // namespace retrial
