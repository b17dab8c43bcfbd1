#include "retrial/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace retrial {

RetrievalPolicy::RetrievalPolicy(const Dataset& dataset, PolicyParams params)
    : params_(std::move(params)) {
  if (dataset.trajectories.empty()) throw ConfigError("retrieval policy: empty dataset");
  if (params_.n_neighbors < 1) throw ConfigError("retrieval policy: n_neighbors must be >= 1");
  if (params_.chunk_len < 1 || params_.chunk_len > kMaxChunkLen)
    throw ConfigError("retrieval policy: chunk length outside [1, 24]");
  if (params_.execute_len < 1 || params_.execute_len > params_.chunk_len)
    throw ConfigError("retrieval policy: execute length outside [1, chunk length]");

  mean_ = dataset.feature_mean;
  std_ = dataset.feature_std;
  mean_length_ = dataset.meta.mean_length;

  // One entry per non-terminal step: the final step of each demo never
  // starts a chunk but still appears inside earlier chunks.
  const int n_traj = static_cast<int>(dataset.trajectories.size());
  actions_.resize(n_traj);
  for (int k = 0; k < n_traj; ++k) {
    const Trajectory& traj = dataset.trajectories[k];
    actions_[k].reserve(traj.length());
    for (const auto& tr : traj.transitions) actions_[k].push_back(tr.action);
    for (int t = 0; t + 1 < traj.length(); ++t) {
      Entry e;
      for (int f = 0; f < kObsDim; ++f)
        e.z[f] = (traj.transitions[t].obs[f] - mean_[f]) / std_[f];
      e.traj = k;
      e.t = t;
      entries_.push_back(std::move(e));
    }
  }
  if (entries_.empty()) throw ConfigError("retrieval policy: no indexable steps");
}

std::vector<RetrievalPolicy::Neighbor> RetrievalPolicy::nearest(const Observation& obs, int n) const {
  validate_observation(obs);

  // Consecutive queries at the same observation (the n_skew chunk samples of
  // one decision) reuse the scan result. Thread-local, so concurrent
  // episodes stay independent.
  struct Cache {
    const void* policy = nullptr;
    int n = 0;
    Observation obs{};
    std::vector<Neighbor> pool;
  };
  thread_local Cache cache;
  if (cache.policy == this && cache.n == n && cache.obs == obs) return cache.pool;

  std::array<double, kObsDim> z;
  for (int f = 0; f < kObsDim; ++f) z[f] = (obs[f] - mean_[f]) / std_[f];

  std::vector<Neighbor> all;
  all.reserve(entries_.size());
  for (const auto& e : entries_) {
    double d2 = 0.0;
    for (int f = 0; f < kObsDim; ++f) {
      const double d = z[f] - e.z[f];
      d2 += params_.feature_weights[f] * d * d;
    }
    all.push_back({d2, e.traj, e.t});
  }
  const std::size_t keep = std::min<std::size_t>(n, all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), [](const Neighbor& a, const Neighbor& b) {
    return std::tie(a.dist2, a.traj, a.t) < std::tie(b.dist2, b.traj, b.t);
  });
  all.resize(keep);
  cache = {this, n, obs, all};
  return all;
}

ActionChunk RetrievalPolicy::sample_chunk(const Observation& obs, SeedStream& rng) const {
  const auto pool = nearest(obs, params_.n_neighbors);
  const Neighbor& pick = pool[rng.uniform_int(pool.size())];
  const auto& demo_actions = actions_[pick.traj];
  const int T = static_cast<int>(demo_actions.size());

  ActionChunk chunk;
  chunk.targets.reserve(params_.chunk_len);
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  for (int i = 0; i < params_.chunk_len; ++i) {
    const ProprioPoint& base = demo_actions[std::min(pick.t + i, T - 1)];
    ProprioPoint p;
    p.x = clamp01(base.x + rng.normal(0.0, params_.action_noise));
    p.y = clamp01(base.y + rng.normal(0.0, params_.action_noise));
    p.gripper = clamp01(base.gripper + rng.normal(0.0, params_.action_noise));
    chunk.targets.push_back(p);
  }
  return chunk;
}

void record_avoid(AvoidanceSet& avoid, const ProprioPoint& p) {
  validate_proprio(p);
  avoid.points.push_back(p);
}

double chunk_avoid_score(const ActionChunk& chunk, const AvoidanceSet& avoid) {
  validate_chunk(chunk);
  if (avoid.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& target : chunk.targets) {
    for (const auto& s : avoid.points) {
      const double dx = target.x - s.x;
      const double dy = target.y - s.y;
      const double dg = target.gripper - s.gripper;
      best = std::min(best, dx * dx + dy * dy + dg * dg);
    }
  }
  return best;
}

std::pair<ActionChunk, int> skewed_select(const std::vector<ActionChunk>& chunks,
                                          const AvoidanceSet& avoid) {
  if (chunks.empty()) throw ValidationError("skewed_select: empty chunk list");
  int best_idx = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(chunks.size()); ++i) {
    const double score = chunk_avoid_score(chunks[i], avoid);
    if (score > best_score) {
      best_score = score;
      best_idx = i;
    }
  }
  return {chunks[best_idx], best_idx};
}

}  // namespace retrial
