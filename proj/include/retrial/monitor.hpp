#pragma once

#include <deque>
#include <ostream>
#include <span>
#include <vector>

#include "retrial/dist.hpp"
#include "retrial/valuefn.hpp"

namespace retrial {

struct MonitorConfig {
  int k = 20;                       // lookback steps
  Backend backend = Backend::categorical;
  double z = 2.0;                   // confidence multiplier on the delta std
  double eta = 0.5;                 // slack on the expected progress rate
  double margin = 0.0;              // scalar-backend slack, in value units
  double mean_expert_length = 1.0;  // T-bar, for step -> progress conversion
  double gamma = 1.0;
};

void validate_config(const MonitorConfig& cfg);

struct ProgressVerdict {
  bool ready = false;      // false during warmup after a clear
  bool triggered = false;
  double observed = 0.0;   // progress statistic (see backend checks)
  double threshold = 0.0;  // trigger when observed < threshold, strictly
  int step = 0;
};

struct TraceRow {
  int step = 0;
  double delta = 0.0;  // observed - threshold; negative means triggered
  double threshold = 0.0;
  bool triggered = false;
};

// Ring of the most recent per-step predictions with the rewards that came
// with them. Cleared on recovery so pre- and post-recovery values are never
// compared; the judged-step trace survives clears (it describes the whole
// episode).
class ValueHistory {
 public:
  struct Entry {
    int step;
    double scalar;
    CategoricalValueDist dist;
    double reward;
  };

  void append_scalar(double v, double reward);
  void append_categorical(const CategoricalValueDist& d, double reward);
  void clear();

  std::size_t size() const { return entries_.size(); }
  const Entry& from_back(std::size_t offset) const { return entries_[entries_.size() - 1 - offset]; }
  int next_step() const { return next_step_; }

  void push_trace(const TraceRow& row) { trace_.push_back(row); }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  void append(Entry e);

  std::deque<Entry> entries_;
  std::vector<TraceRow> trace_;
  int next_step_ = 0;  // episode-global step index, monotone across clears
};

// k-step bootstrapped target for V(s_{t-k}): gamma^k * v_now plus the
// discounted rewards, oldest first.
double bellman_target_scalar(double v_now, std::span<const double> rewards, double gamma);

// Triggered iff v_past > y + margin (strict: exactly on pace never
// triggers). observed = y - v_past, threshold = -margin.
ProgressVerdict check_scalar(double v_past, double y, double margin);

// Triggered iff the mean + z*std upper bound of the delta distribution
// falls strictly below eta * k / T-bar. observed = upper bound,
// threshold = eta * k / T-bar, both in progress-fraction units.
ProgressVerdict check_categorical(const CategoricalValueDist& d_past,
                                  const CategoricalValueDist& d_now, const MonitorConfig& cfg);

// Appends the prediction for obs (with the reward that came with it) and,
// once k+1 entries exist since the last clear, judges against the entry k
// steps back. Judged steps are recorded in the history's trace.
ProgressVerdict observe_and_judge(ValueHistory& history, const ValueModel& model,
                                  const Observation& obs, double reward, const MonitorConfig& cfg);

// CSV rows "step,delta,threshold,triggered", one per judged step.
void emit_trace(const ValueHistory& history, const MonitorConfig& cfg, std::ostream& sink);

}  // namespace retrial
