#pragma once

#include <utility>
#include <vector>

#include "retrial/demogen.hpp"
#include "retrial/rng.hpp"
#include "retrial/types.hpp"

namespace retrial {

struct PolicyParams {
  int n_neighbors = 16;        // candidate pool per query
  double action_noise = 0.01;  // per-coordinate Gaussian on copied targets
  int chunk_len = 24;          // predicted chunk length H
  int execute_len = 16;        // steps executed before re-sampling
  std::array<double, kObsDim> feature_weights = [] {
    std::array<double, kObsDim> w;
    w.fill(1.0);
    return w;
  }();
};

// Stochastic multimodal base policy: nearest-neighbor retrieval over the
// demonstration set in standardized weighted feature space. A sampled chunk
// copies the neighbor demo's next H actions (repeating the final action if
// the demo ends early) plus Gaussian noise, clamped to [0,1].
class RetrievalPolicy {
 public:
  RetrievalPolicy(const Dataset& dataset, PolicyParams params = {});

  ActionChunk sample_chunk(const Observation& obs, SeedStream& rng) const;

  std::size_t index_size() const { return entries_.size(); }
  const PolicyParams& params() const { return params_; }
  double mean_expert_length() const { return mean_length_; }
  const std::array<double, kObsDim>& feature_mean() const { return mean_; }

  struct Neighbor {
    double dist2;
    int traj;
    int t;
  };
  std::vector<Neighbor> nearest(const Observation& obs, int n) const;

 private:
  PolicyParams params_;
  std::array<double, kObsDim> mean_{}, std_{};
  struct Entry {
    std::array<double, kObsDim> z;  // standardized features
    int traj;
    int t;
  };
  std::vector<Entry> entries_;
  std::vector<std::vector<ProprioPoint>> actions_;  // per-trajectory action lists
  double mean_length_ = 0.0;
};

// Proprio points of past mistakes; insertion order preserved, duplicates
// allowed, cleared between episodes.
struct AvoidanceSet {
  std::vector<ProprioPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

void record_avoid(AvoidanceSet& avoid, const ProprioPoint& p);

struct SkewConfig {
  int n_skew = 10;  // chunks sampled per decision
};

// Minimum squared (x, y, gripper) distance from any chunk step to any
// avoidance point; +infinity when the set is empty.
double chunk_avoid_score(const ActionChunk& chunk, const AvoidanceSet& avoid);

// Picks the chunk maximizing chunk_avoid_score; ties break to the lowest
// index.
std::pair<ActionChunk, int> skewed_select(const std::vector<ActionChunk>& chunks,
                                          const AvoidanceSet& avoid);

}  // namespace retrial
