#include "retrial/monitor.hpp"

#include <cmath>

namespace retrial {

void validate_config(const MonitorConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("monitor: k must be >= 1");
  if (cfg.mean_expert_length < 1.0) throw ConfigError("monitor: mean expert length must be >= 1");
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) throw ConfigError("monitor: eta must be in (0,1]");
  if (cfg.z < 0.0) throw ConfigError("monitor: z must be >= 0");
  if (cfg.margin < 0.0) throw ConfigError("monitor: margin must be >= 0");
}

void ValueHistory::append(Entry e) {
  e.step = next_step_++;
  entries_.push_back(std::move(e));
  // Bounded by the largest lookback any caller uses; generous cap.
  if (entries_.size() > 4096) entries_.pop_front();
}

void ValueHistory::append_scalar(double v, double reward) {
  Entry e;
  e.scalar = v;
  e.reward = reward;
  append(std::move(e));
}

void ValueHistory::append_categorical(const CategoricalValueDist& d, double reward) {
  Entry e;
  e.scalar = 0.0;
  e.dist = d;
  e.reward = reward;
  append(std::move(e));
}

void ValueHistory::clear() { entries_.clear(); }

double bellman_target_scalar(double v_now, std::span<const double> rewards, double gamma) {
  const int k = static_cast<int>(rewards.size());
  if (k < 1) throw ValidationError("bellman_target_scalar: need at least one reward");
  double y = 0.0;
  double g = 1.0;
  for (int m = 0; m < k; ++m) {
    y += g * rewards[m];  // rewards ordered oldest first
    g *= gamma;
  }
  return y + g * v_now;
}

ProgressVerdict check_scalar(double v_past, double y, double margin) {
  ProgressVerdict v;
  v.ready = true;
  v.observed = y - v_past;
  v.threshold = -margin;
  v.triggered = v.observed < v.threshold;
  return v;
}

ProgressVerdict check_categorical(const CategoricalValueDist& d_past,
                                  const CategoricalValueDist& d_now, const MonitorConfig& cfg) {
  validate_config(cfg);
  ProgressVerdict v;
  v.ready = true;
  v.observed = upper_bound(dist_delta(d_now, d_past), cfg.z);
  v.threshold = cfg.eta * cfg.k / cfg.mean_expert_length;
  v.triggered = v.observed < v.threshold;
  return v;
}

ProgressVerdict observe_and_judge(ValueHistory& history, const ValueModel& model,
                                  const Observation& obs, double reward, const MonitorConfig& cfg) {
  validate_config(cfg);
  if (model.backend != cfg.backend)
    throw ConfigError("monitor: model backend does not match monitor backend");

  if (cfg.backend == Backend::scalar) {
    history.append_scalar(predict_scalar(model, obs), reward);
  } else {
    history.append_categorical(predict_categorical(model, obs), reward);
  }

  ProgressVerdict verdict;
  verdict.step = history.next_step() - 1;
  const std::size_t needed = static_cast<std::size_t>(cfg.k) + 1;
  if (history.size() < needed) return verdict;  // warmup: not ready

  const auto& past = history.from_back(cfg.k);
  const auto& now = history.from_back(0);
  if (cfg.backend == Backend::scalar) {
    std::vector<double> rewards(cfg.k);
    for (int m = 0; m < cfg.k; ++m) rewards[m] = history.from_back(cfg.k - 1 - m).reward;
    const double y = bellman_target_scalar(now.scalar, rewards, cfg.gamma);
    verdict = check_scalar(past.scalar, y, cfg.margin);
  } else {
    verdict = check_categorical(past.dist, now.dist, cfg);
  }
  verdict.step = history.next_step() - 1;
  history.push_trace(
      {verdict.step, verdict.observed - verdict.threshold, verdict.threshold, verdict.triggered});
  return verdict;
}

void emit_trace(const ValueHistory& history, const MonitorConfig& cfg, std::ostream& sink) {
  validate_config(cfg);
  sink << "step,delta,threshold,triggered\n";
  for (const auto& row : history.trace()) {
    sink << row.step << ',' << row.delta << ',' << row.threshold << ',' << (row.triggered ? 1 : 0)
         << '\n';
  }
  if (!sink) throw ParseError("emit_trace: sink write failure");
}

}  // namespace retrial
