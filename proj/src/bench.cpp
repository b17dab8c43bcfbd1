#include "retrial/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace retrial {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1); zero for fewer than two values.
double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

nlohmann::json result_to_json(const EpisodeResult& r) {
  nlohmann::json j;
  j["success"] = r.success;
  j["steps"] = r.steps;
  j["recoveries"] = r.recoveries;
  j["recovery_steps"] = r.recovery_steps;
  j["attempt_lengths"] = r.attempt_lengths;
  nlohmann::json grasps = nlohmann::json::array();
  for (const auto& g : r.grasp_attempts) grasps.push_back({g[0], g[1]});
  j["grasp_attempts"] = std::move(grasps);
  nlohmann::json avoid = nlohmann::json::array();
  for (const auto& p : r.avoid_points) avoid.push_back({p.x, p.y, p.gripper});
  j["avoid_points"] = std::move(avoid);
  nlohmann::json blocked = nlohmann::json::array();
  nlohmann::json slip = nlohmann::json::array();
  for (const auto& a : r.hidden.affordances) {
    blocked.push_back(a.blocked);
    slip.push_back(a.slip_prob);
  }
  j["hidden"] = {{"blocked", std::move(blocked)},
                 {"slip_prob", std::move(slip)},
                 {"offset_scale", {r.hidden.offset_scale_x, r.hidden.offset_scale_y}}};
  j["initial_obs"] = r.initial_obs;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& row : r.trace)
    trace.push_back({row.step, row.delta, row.threshold, row.triggered});
  j["trace"] = std::move(trace);
  return j;
}

EpisodeResult result_from_json(const nlohmann::json& j) {
  EpisodeResult r;
  r.success = j.at("success").get<bool>();
  r.steps = j.at("steps").get<int>();
  r.recoveries = j.at("recoveries").get<int>();
  r.recovery_steps = j.at("recovery_steps").get<std::vector<int>>();
  r.attempt_lengths = j.at("attempt_lengths").get<std::vector<int>>();
  for (const auto& g : j.at("grasp_attempts"))
    r.grasp_attempts.push_back({g[0].get<double>(), g[1].get<double>()});
  for (const auto& p : j.at("avoid_points"))
    r.avoid_points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  const auto& h = j.at("hidden");
  for (int i = 0; i < kNumAffordances; ++i) {
    r.hidden.affordances[i].blocked = h.at("blocked")[i].get<bool>();
    r.hidden.affordances[i].slip_prob = h.at("slip_prob")[i].get<double>();
  }
  r.hidden.offset_scale_x = h.at("offset_scale")[0].get<double>();
  r.hidden.offset_scale_y = h.at("offset_scale")[1].get<double>();
  const auto& obs = j.at("initial_obs");
  for (int f = 0; f < kObsDim; ++f) r.initial_obs[f] = obs[f].get<double>();
  for (const auto& row : j.at("trace"))
    r.trace.push_back(
        {row[0].get<int>(), row[1].get<double>(), row[2].get<double>(), row[3].get<bool>()});
  return r;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::base_no_recovery: return "base_no_recovery";
    case Method::interval_recovery: return "interval_recovery";
    case Method::ours_no_skew: return "ours_no_skew";
    case Method::ours_full: return "ours_full";
  }
  throw ValidationError("unknown method value");
}

Method method_from_string(const std::string& s) {
  if (s == "base_no_recovery") return Method::base_no_recovery;
  if (s == "interval_recovery") return Method::interval_recovery;
  if (s == "ours_no_skew") return Method::ours_no_skew;
  if (s == "ours_full") return Method::ours_full;
  throw ValidationError("unknown method name: " + s);
}

DeployConfig make_deploy_config(Method method, double mean_expert_length, int horizon,
                                int max_recoveries, int n_skew_full) {
  DeployConfig cfg;
  cfg.horizon = horizon;
  cfg.max_recoveries = max_recoveries;
  cfg.monitor.mean_expert_length = mean_expert_length;
  switch (method) {
    case Method::base_no_recovery:
      cfg.monitor_enabled = false;
      cfg.skew.n_skew = 1;
      break;
    case Method::interval_recovery:
      cfg.monitor_enabled = false;
      cfg.interval_period = interval_period(mean_expert_length);
      cfg.skew.n_skew = 1;
      break;
    case Method::ours_no_skew:
      cfg.monitor_enabled = true;
      cfg.skew.n_skew = 1;
      break;
    case Method::ours_full:
      cfg.monitor_enabled = true;
      cfg.skew.n_skew = n_skew_full;
      break;
  }
  return cfg;
}

BenchConfig BenchConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  BenchConfig cfg;
  try {
    for (const auto& v : j.at("variants")) cfg.variants.push_back(variant_from_string(v.get<std::string>()));
    cfg.trials = j.value("trials", 100);
    cfg.demos_path = j.at("demos").get<std::string>();
    cfg.value_model_paths = j.at("value_models").get<std::vector<std::string>>();
    if (j.contains("model_seeds"))
      cfg.model_seeds = j["model_seeds"].get<std::vector<std::uint64_t>>();
    else {
      for (std::size_t i = 0; i < cfg.value_model_paths.size(); ++i) cfg.model_seeds.push_back(i + 1);
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j["methods"]) cfg.methods.push_back(method_from_string(m.get<std::string>()));
    }
    cfg.out_dir = j.value("out_dir", std::string());
    cfg.horizon = j.value("horizon", 400);
    cfg.max_recoveries = j.value("max_recoveries", 20);
    cfg.n_skew = j.value("n_skew", 10);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  if (cfg.variants.empty()) throw ConfigError("bench config: no variants");
  if (cfg.trials < 1) throw ConfigError("bench config: trials must be >= 1");
  if (cfg.value_model_paths.empty()) throw ConfigError("bench config: no value models");
  if (cfg.model_seeds.size() != cfg.value_model_paths.size())
    throw ConfigError("bench config: model_seeds and value_models must align");
  return cfg;
}

std::string BenchConfig::to_json() const {
  nlohmann::json j;
  nlohmann::json variants = nlohmann::json::array();
  for (Variant v : this->variants) variants.push_back(to_string(v));
  j["variants"] = std::move(variants);
  j["trials"] = trials;
  j["demos"] = demos_path;
  j["value_models"] = value_model_paths;
  j["model_seeds"] = model_seeds;
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : this->methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["out_dir"] = out_dir;
  j["horizon"] = horizon;
  j["max_recoveries"] = max_recoveries;
  j["n_skew"] = n_skew;
  return j.dump();
}

std::string record_to_json(const TrialRecord& r) {
  nlohmann::json j = result_to_json(r.result);
  j["variant"] = to_string(r.variant);
  j["method"] = to_string(r.method);
  j["seed"] = r.seed;
  j["trial"] = r.trial;
  j["horizon"] = r.horizon;
  j["mean_expert_length"] = r.mean_expert_length;
  return j.dump();
}

TrialRecord record_from_json(const std::string& line, int line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("trial record: ") + e.what(), line_no);
  }
  TrialRecord r;
  try {
    r.variant = variant_from_string(j.at("variant").get<std::string>());
    r.method = method_from_string(j.at("method").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial = j.at("trial").get<int>();
    r.horizon = j.at("horizon").get<int>();
    r.mean_expert_length = j.at("mean_expert_length").get<double>();
    r.result = result_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trial record: ") + e.what(), line_no);
  }
  return r;
}

std::vector<TrialRecord> run_matched(const BenchConfig& cfg) {
  // Fail on missing artifacts before any trial runs.
  if (!std::filesystem::exists(cfg.demos_path))
    throw ParseError("missing demos file: " + cfg.demos_path);
  for (const auto& p : cfg.value_model_paths) {
    if (!std::filesystem::exists(p)) throw ParseError("missing value model: " + p);
  }

  const Dataset dataset = read_dataset(cfg.demos_path);
  const RetrievalPolicy policy(dataset);
  std::vector<ValueModel> models;
  models.reserve(cfg.value_model_paths.size());
  for (const auto& p : cfg.value_model_paths) models.push_back(read_model(p));

  struct Task {
    int variant_i, method_i, seed_i, trial;
  };
  std::vector<Task> tasks;
  for (int vi = 0; vi < static_cast<int>(cfg.variants.size()); ++vi)
    for (int mi = 0; mi < static_cast<int>(cfg.methods.size()); ++mi)
      for (int si = 0; si < static_cast<int>(cfg.model_seeds.size()); ++si)
        for (int trial = 0; trial < cfg.trials; ++trial) tasks.push_back({vi, mi, si, trial});

  std::vector<TrialRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      const Variant variant = cfg.variants[task.variant_i];
      const Method method = cfg.methods[task.method_i];
      const std::uint64_t seed = cfg.model_seeds[task.seed_i];

      ScenarioConfig scenario;
      scenario.variant = variant;
      DeployConfig deploy =
          make_deploy_config(method, dataset.meta.mean_length, cfg.horizon, cfg.max_recoveries,
                             cfg.n_skew);

      // The scenario stream depends on (seed, trial) only, so every method
      // and variant draws the same hidden parameter and object pose.
      SeedStream scenario_rng(seed, static_cast<std::uint64_t>(task.trial));
      const std::uint64_t tag =
          (static_cast<std::uint64_t>(task.variant_i) << 48) |
          (static_cast<std::uint64_t>(task.method_i) << 40) | static_cast<std::uint64_t>(task.trial);
      SeedStream dynamics_rng(seed, (1ull << 56) | tag);
      SeedStream policy_rng(seed, (2ull << 56) | tag);

      TrialRecord rec;
      rec.variant = variant;
      rec.method = method;
      rec.seed = seed;
      rec.trial = task.trial;
      rec.horizon = cfg.horizon;
      rec.mean_expert_length = dataset.meta.mean_length;
      rec.result = run_episode(scenario, policy, &models[task.seed_i], deploy, scenario_rng,
                               dynamics_rng, policy_rng);
      records[i] = std::move(rec);
    }
  };

  const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.variant, a.method, a.seed, a.trial) <
           std::tie(b.variant, b.method, b.seed, b.trial);
  });
  return records;
}

std::vector<double> grasp_distance_per_trial(const std::vector<TrialRecord>& records,
                                             Variant variant, Method method) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.variant != variant || r.method != method) continue;
    const auto& g = r.result.grasp_attempts;
    if (g.size() < 2) continue;
    double total = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i)
      total += std::hypot(g[i][0] - g[i - 1][0], g[i][1] - g[i - 1][1]);
    out.push_back(total / static_cast<double>(g.size() - 1));
  }
  return out;
}

Summary summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ValidationError("summarize: no records");

  Summary summary;
  summary.horizon = records.front().horizon;
  summary.mean_expert_length = records.front().mean_expert_length;

  std::map<std::pair<Variant, Method>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) groups[{r.variant, r.method}].push_back(&r);

  for (const auto& [key, group] : groups) {
    MethodSummary ms;
    ms.variant = key.first;
    ms.method = key.second;
    ms.n_trials = static_cast<int>(group.size());

    std::map<std::uint64_t, std::pair<int, int>> per_seed;  // successes, trials
    std::map<std::uint64_t, std::pair<double, int>> per_seed_steps;
    double recoveries_total = 0.0;
    int before_mean_len = 0, total_recovered_attempts = 0;
    int max_recovery_count = 0;

    for (const TrialRecord* r : group) {
      auto& [succ, cnt] = per_seed[r->seed];
      cnt += 1;
      if (r->result.success) succ += 1;
      auto& [step_sum, step_cnt] = per_seed_steps[r->seed];
      step_sum += r->result.success ? r->result.steps : r->horizon;
      step_cnt += 1;
      recoveries_total += r->result.recoveries;
      ms.recovery_count_hist[r->result.recoveries] += 1;
      max_recovery_count = std::max(max_recovery_count, r->result.recoveries);
      for (int len : r->result.attempt_lengths) {
        ++total_recovered_attempts;
        if (len < r->mean_expert_length) ++before_mean_len;
        const std::size_t bucket = static_cast<std::size_t>(len / 10);
        if (ms.attempt_hist.size() <= bucket) ms.attempt_hist.resize(bucket + 1, 0);
        ms.attempt_hist[bucket] += 1;
      }
    }

    std::vector<double> seed_rates, seed_steps;
    for (const auto& [seed, sc] : per_seed)
      seed_rates.push_back(static_cast<double>(sc.first) / sc.second);
    for (const auto& [seed, ss] : per_seed_steps) seed_steps.push_back(ss.first / ss.second);
    ms.success_per_seed = seed_rates;
    ms.success_mean = mean_of(seed_rates);
    ms.success_std = sample_std(seed_rates);
    ms.steps_mean = mean_of(seed_steps);
    ms.steps_std = sample_std(seed_steps);
    ms.recoveries_mean = recoveries_total / ms.n_trials;
    ms.frac_recovery_before_mean_len =
        total_recovered_attempts > 0
            ? static_cast<double>(before_mean_len) / total_recovered_attempts
            : 0.0;
    const std::vector<double> dists = grasp_distance_per_trial(records, key.first, key.second);
    ms.grasp_distance_mean = dists.empty() ? 0.0 : mean_of(dists);

    summary.entries.push_back(std::move(ms));
  }
  return summary;
}

std::string summary_to_json(const Summary& summary) {
  nlohmann::json j;
  j["horizon"] = summary.horizon;
  j["mean_expert_length"] = summary.mean_expert_length;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& ms : summary.entries) {
    nlohmann::json e;
    e["variant"] = to_string(ms.variant);
    e["method"] = to_string(ms.method);
    e["n_trials"] = ms.n_trials;
    e["success_per_seed"] = ms.success_per_seed;
    e["success_mean"] = ms.success_mean;
    e["success_std"] = ms.success_std;
    e["steps_mean"] = ms.steps_mean;
    e["steps_std"] = ms.steps_std;
    e["recoveries_mean"] = ms.recoveries_mean;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [count, trials] : ms.recovery_count_hist) hist[std::to_string(count)] = trials;
    e["recovery_count_hist"] = std::move(hist);
    e["attempt_length_hist"] = {{"bucket_width", 10}, {"counts", ms.attempt_hist}};
    e["frac_recovery_before_mean_len"] = ms.frac_recovery_before_mean_len;
    e["grasp_distance_mean"] = ms.grasp_distance_mean;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j.dump(2);
}

std::string summary_to_csv(const Summary& summary) {
  std::ostringstream out;
  out << "variant,method,success_mean,success_std,steps_mean,steps_std,recoveries_mean\n";
  out.precision(17);
  for (const auto& ms : summary.entries) {
    out << to_string(ms.variant) << ',' << to_string(ms.method) << ',' << ms.success_mean << ','
        << ms.success_std << ',' << ms.steps_mean << ',' << ms.steps_std << ','
        << ms.recoveries_mean << '\n';
  }
  return out.str();
}

namespace {

// Minimal static SVG output; no plotting dependency.
struct SvgCanvas {
  std::ostringstream body;
  int width, height;

  SvgCanvas(int w, int h) : width(w), height(h) {}

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
         << "\" fill=\"" << fill << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            const std::string& dash = "") {
    body << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
         << "\" stroke=\"" << stroke << "\" stroke-width=\"1\""
         << (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") << "/>\n";
  }
  void text(double x, double y, const std::string& t, int size = 11,
            const std::string& anchor = "start") {
    body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
         << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << t << "</text>\n";
  }
  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

const char* method_color(Method m) {
  switch (m) {
    case Method::base_no_recovery: return "#888888";
    case Method::interval_recovery: return "#5b8dd9";
    case Method::ours_no_skew: return "#e0a458";
    case Method::ours_full: return "#4c9a62";
  }
  return "#000000";
}

std::string success_chart_svg(const Summary& summary) {
  std::vector<Variant> variants;
  std::vector<Method> methods;
  for (const auto& ms : summary.entries) {
    if (std::find(variants.begin(), variants.end(), ms.variant) == variants.end())
      variants.push_back(ms.variant);
    if (std::find(methods.begin(), methods.end(), ms.method) == methods.end())
      methods.push_back(ms.method);
  }

  const int bar_w = 34, gap = 10, group_gap = 46;
  const int plot_h = 220, top = 30, left = 50;
  const int group_w = static_cast<int>(methods.size()) * (bar_w + gap) + group_gap;
  const int width = left + static_cast<int>(variants.size()) * group_w + 40;
  const int height = top + plot_h + 120;

  SvgCanvas svg(width, height);
  svg.text(left, 18, "success rate by method", 13);
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double y = top + plot_h * (1.0 - frac);
    svg.line(left - 4, y, width - 20, y, "#dddddd");
    svg.text(left - 8, y + 4, std::to_string(25 * tick) + "%", 10, "end");
  }

  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const double gx = left + vi * group_w;
    svg.text(gx + (group_w - group_gap) / 2.0, top + plot_h + 36, to_string(variants[vi]), 12,
             "middle");
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const MethodSummary* ms = nullptr;
      for (const auto& e : summary.entries) {
        if (e.variant == variants[vi] && e.method == methods[mi]) ms = &e;
      }
      if (!ms) continue;
      const double x = gx + mi * (bar_w + gap);
      const double h = plot_h * ms->success_mean;
      svg.rect(x, top + plot_h - h, bar_w, h, method_color(methods[mi]));
      // error bar: +- one std across seeds
      const double cx = x + bar_w / 2.0;
      const double y0 = top + plot_h - std::min(1.0, ms->success_mean + ms->success_std) * plot_h;
      const double y1 = top + plot_h - std::max(0.0, ms->success_mean - ms->success_std) * plot_h;
      svg.line(cx, y0, cx, y1, "#222222");
      svg.line(cx - 5, y0, cx + 5, y0, "#222222");
      svg.line(cx - 5, y1, cx + 5, y1, "#222222");
    }
  }
  // legend
  double lx = left;
  const double ly = top + plot_h + 60;
  for (Method m : methods) {
    svg.rect(lx, ly - 10, 12, 12, method_color(m));
    svg.text(lx + 16, ly, to_string(m), 11);
    lx += 16 + 8.0 * to_string(m).size() + 24;
  }
  return svg.str();
}

std::string recovery_histogram_svg(const Summary& summary) {
  // Attempt-length distributions for the methods that recover, one panel
  // per variant, with the expert mean-length marker.
  std::vector<Variant> variants;
  for (const auto& ms : summary.entries) {
    if (ms.attempt_hist.empty()) continue;
    if (std::find(variants.begin(), variants.end(), ms.variant) == variants.end())
      variants.push_back(ms.variant);
  }

  const int panel_w = 360, panel_h = 180, top = 40, left = 50, panel_gap = 40;
  const int width = left + panel_w + 40;
  const int height =
      top + static_cast<int>(std::max<std::size_t>(variants.size(), 1)) * (panel_h + panel_gap) + 60;
  SvgCanvas svg(width, height);
  svg.text(left, 18, "recovered-attempt length (10-step buckets)", 13);

  double py = top;
  for (Variant v : variants) {
    std::size_t n_buckets = 1;
    int peak = 1;
    for (const auto& ms : summary.entries) {
      if (ms.variant != v) continue;
      n_buckets = std::max(n_buckets, ms.attempt_hist.size());
      for (int c : ms.attempt_hist) peak = std::max(peak, c);
    }
    const double bw = static_cast<double>(panel_w) / static_cast<double>(n_buckets);
    for (const auto& ms : summary.entries) {
      if (ms.variant != v || ms.attempt_hist.empty() || ms.method != Method::ours_full) continue;
      for (std::size_t b = 0; b < ms.attempt_hist.size(); ++b) {
        const double h = panel_h * (static_cast<double>(ms.attempt_hist[b]) / peak);
        svg.rect(left + b * bw, py + panel_h - h, bw - 1.0, h, method_color(ms.method));
      }
    }
    const double marker_x = left + (summary.mean_expert_length / 10.0) * bw;
    svg.line(marker_x, py, marker_x, py + panel_h, "#cc3333", "4,3");
    svg.text(marker_x + 4, py + 12, "expert mean", 10);
    svg.text(left, py + panel_h + 16, to_string(v) + " (ours_full)", 11);
    py += panel_h + panel_gap;
  }
  return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw ParseError("write failed: " + path.string());
}

}  // namespace

void report(const Summary& summary, const std::vector<TrialRecord>& records,
            const std::string& out_dir) {
  if (records.empty() || summary.entries.empty())
    throw ValidationError("report: empty summary or records");
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::ostringstream trials;
  for (const auto& r : records) trials << record_to_json(r) << "\n";
  write_file(dir / "trials.jsonl", trials.str());
  write_file(dir / "summary.json", summary_to_json(summary) + "\n");
  write_file(dir / "summary.csv", summary_to_csv(summary));
  write_file(dir / "success_rate.svg", success_chart_svg(summary));
  write_file(dir / "recovery_histogram.svg", recovery_histogram_svg(summary));
}

}  // namespace retrial
