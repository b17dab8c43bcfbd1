#pragma once

#include <array>
#include <string>
#include <vector>

#include "retrial/graspworld.hpp"
#include "retrial/types.hpp"

namespace retrial {

struct DatasetMeta {
  Variant variant = Variant::train;
  std::uint64_t seed = 0;
  int count = 0;
  double mean_length = 0.0;
};

// Success-only demonstration set plus the per-feature statistics used for
// standardization everywhere downstream.
struct Dataset {
  std::vector<Trajectory> trajectories;
  std::array<double, kObsDim> feature_mean{};
  std::array<double, kObsDim> feature_std{};
  DatasetMeta meta;
};

// Scripted controller with privileged access to the hidden parameter. It
// commits to one eligible affordance per episode, approaches it with
// Gaussian target noise, closes the gripper in range, then carries to the
// goal.
class ExpertController {
 public:
  ExpertController(const ScenarioConfig& cfg, const HiddenParam& hidden, SeedStream& rng);

  ProprioPoint action(const WorldState& state, SeedStream& rng) const;
  int chosen_affordance() const { return chosen_; }

 private:
  const ScenarioConfig& cfg_;
  int chosen_;
};

// Rolls expert episodes and keeps exactly n clean successes. Episodes that
// slip or run past 3x the straight-line-optimal step count are discarded
// and re-rolled.
Dataset generate_demos(const ScenarioConfig& cfg, int n, SeedStream& rng);

// Recomputes feature statistics over all observations (std floored at 1e-6).
void compute_feature_stats(Dataset& dataset);

// Newline-delimited JSON, header line first. Round-trips at full float
// precision.
void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

std::uint64_t dataset_hash(const Dataset& dataset);

}  // namespace retrial
