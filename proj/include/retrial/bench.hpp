#pragma once

#include <map>
#include <string>
#include <vector>

#include "retrial/deploy.hpp"

namespace retrial {

enum class Method { base_no_recovery, interval_recovery, ours_no_skew, ours_full };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

inline constexpr std::array<Method, 4> kAllMethods = {
    Method::base_no_recovery, Method::interval_recovery, Method::ours_no_skew, Method::ours_full};

// Maps a method onto deployment flags: base runs bare, interval replaces
// the monitor with a fixed-period trigger, ours_no_skew monitors with a
// single sampled chunk, ours_full monitors with n_skew chunks.
DeployConfig make_deploy_config(Method method, double mean_expert_length, int horizon,
                                int max_recoveries, int n_skew_full = 10);

struct BenchConfig {
  std::vector<Variant> variants;
  int trials = 100;
  std::vector<std::uint64_t> model_seeds;       // aligned with value_model_paths
  std::string demos_path;
  std::vector<std::string> value_model_paths;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::string out_dir;
  int horizon = 400;
  int max_recoveries = 20;
  int n_skew = 10;

  static BenchConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct TrialRecord {
  Variant variant;
  Method method;
  std::uint64_t seed;
  int trial;
  int horizon;
  double mean_expert_length;
  EpisodeResult result;
};

std::string record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const std::string& line, int line_no = 0);

// Runs every (variant, seed, trial, method) cell; the scenario stream
// depends only on (seed, trial) so all methods face identical hidden
// parameters and object poses. Records come back sorted by
// (variant, method, seed, trial).
std::vector<TrialRecord> run_matched(const BenchConfig& cfg);

struct MethodSummary {
  Variant variant;
  Method method;
  int n_trials = 0;
  std::vector<double> success_per_seed;
  double success_mean = 0.0;
  double success_std = 0.0;
  double steps_mean = 0.0;  // failures scored at the horizon
  double steps_std = 0.0;
  double recoveries_mean = 0.0;
  std::map<int, int> recovery_count_hist;
  std::vector<int> attempt_hist;  // 10-step buckets over recovered attempt lengths
  double frac_recovery_before_mean_len = 0.0;
  double grasp_distance_mean = 0.0;  // consecutive grasp-attempt spacing
};

struct Summary {
  int horizon = 0;
  double mean_expert_length = 0.0;
  std::vector<MethodSummary> entries;
};

Summary summarize(const std::vector<TrialRecord>& records);

// Per-trial mean distance between consecutive grasp attempts; skips trials
// with fewer than two attempts.
std::vector<double> grasp_distance_per_trial(const std::vector<TrialRecord>& records,
                                             Variant variant, Method method);

// Writes trials.jsonl, summary.json, summary.csv and the SVG charts into
// out_dir.
void report(const Summary& summary, const std::vector<TrialRecord>& records,
            const std::string& out_dir);

std::string summary_to_json(const Summary& summary);
std::string summary_to_csv(const Summary& summary);

}  // namespace retrial
