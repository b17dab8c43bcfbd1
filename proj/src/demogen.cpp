#include "retrial/demogen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace retrial {

namespace {

constexpr double kApproachNoise = 0.01;
constexpr double kStdFloor = 1e-6;
constexpr int kRejectionWindow = 200;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

nlohmann::json hidden_to_json(const HiddenParam& h) {
  nlohmann::json j;
  nlohmann::json blocked = nlohmann::json::array();
  nlohmann::json slip = nlohmann::json::array();
  for (const auto& a : h.affordances) {
    blocked.push_back(a.blocked);
    slip.push_back(a.slip_prob);
  }
  j["blocked"] = blocked;
  j["slip_prob"] = slip;
  j["offset_scale"] = {h.offset_scale_x, h.offset_scale_y};
  return j;
}

HiddenParam hidden_from_json(const nlohmann::json& j) {
  HiddenParam h;
  const auto& blocked = j.at("blocked");
  const auto& slip = j.at("slip_prob");
  if (blocked.size() != kNumAffordances || slip.size() != kNumAffordances)
    throw ParseError("hidden record: need 4 affordances");
  for (int i = 0; i < kNumAffordances; ++i) {
    h.affordances[i].blocked = blocked[i].get<bool>();
    h.affordances[i].slip_prob = slip[i].get<double>();
  }
  if (j.contains("offset_scale")) {
    h.offset_scale_x = j["offset_scale"][0].get<double>();
    h.offset_scale_y = j["offset_scale"][1].get<double>();
  }
  return h;
}

}  // namespace

ExpertController::ExpertController(const ScenarioConfig& cfg, const HiddenParam& hidden,
                                   SeedStream& rng)
    : cfg_(cfg), chosen_(-1) {
  std::vector<int> eligible;
  for (int i = 0; i < kNumAffordances; ++i) {
    if (!hidden.affordances[i].blocked && hidden.affordances[i].slip_prob <= 0.05)
      eligible.push_back(i);
  }
  if (eligible.empty()) throw ConfigError("expert: no eligible affordance (scenario not solvable)");
  chosen_ = eligible[rng.uniform_int(eligible.size())];
}

ProprioPoint ExpertController::action(const WorldState& state, SeedStream& rng) const {
  if (state.attached) {
    return {cfg_.goal_center[0], cfg_.goal_center[1], 0.0};
  }
  const auto affords = affordance_positions(cfg_, state);
  const double ax = affords[chosen_][0];
  const double ay = affords[chosen_][1];
  const double d = std::hypot(state.ee.x - ax, state.ee.y - ay);
  if (d <= cfg_.grasp_radius) {
    return {clamp01(ax), clamp01(ay), 0.0};  // close on the affordance, no noise
  }
  return {clamp01(ax + rng.normal(0.0, kApproachNoise)), clamp01(ay + rng.normal(0.0, kApproachNoise)),
          1.0};
}

Dataset generate_demos(const ScenarioConfig& cfg, int n, SeedStream& rng) {
  if (n < 1) throw ConfigError("generate_demos: n must be >= 1");
  validate_config(cfg);

  Dataset out;
  out.meta.variant = cfg.variant;
  out.meta.seed = rng.seed();
  out.meta.count = n;

  int attempts = 0;
  int accepted = 0;
  while (accepted < n) {
    ++attempts;
    if (attempts >= kRejectionWindow && accepted * 100 < attempts)
      throw ConfigError("generate_demos: rejection rate above 99%, scenario misconfigured");

    WorldState state = reset(cfg, rng);
    ExpertController expert(cfg, state.hidden, rng);

    // 3x the straight-line-optimal step count, via the object's position.
    const double d1 = std::hypot(cfg.home.x - state.obj_x, cfg.home.y - state.obj_y);
    const double d2 = std::hypot(cfg.goal_center[0] - state.obj_x, cfg.goal_center[1] - state.obj_y);
    const int optimal = static_cast<int>(std::ceil((d1 + d2) / cfg.v_max)) + 2;
    const int cap = 3 * optimal;

    Trajectory traj;
    traj.hidden_record = state.hidden;
    bool slipped = false;
    for (int t = 0; t < cap && !state.terminal; ++t) {
      Transition tr;
      tr.obs = observe(cfg, state);
      tr.proprio = state.ee;
      tr.action = expert.action(state, rng);
      tr.t = t;
      StepOutcome oc = step(cfg, state, tr.action, rng);
      tr.reward = oc.reward;
      tr.events = oc.events;
      traj.transitions.push_back(tr);
      if (oc.events.has(Event::Slip)) {
        slipped = true;
        break;
      }
    }
    if (slipped || !state.terminal || traj.length() < 2) continue;

    traj.success = true;
    validate_trajectory(traj);
    out.trajectories.push_back(std::move(traj));
    ++accepted;
  }

  double total_len = 0.0;
  for (const auto& t : out.trajectories) total_len += t.length();
  out.meta.mean_length = total_len / n;
  compute_feature_stats(out);
  return out;
}

void compute_feature_stats(Dataset& dataset) {
  std::array<double, kObsDim> sum{};
  std::array<double, kObsDim> sq{};
  std::size_t count = 0;
  for (const auto& traj : dataset.trajectories) {
    for (const auto& tr : traj.transitions) {
      for (int f = 0; f < kObsDim; ++f) {
        sum[f] += tr.obs[f];
        sq[f] += tr.obs[f] * tr.obs[f];
      }
      ++count;
    }
  }
  if (count == 0) throw ConfigError("feature stats: empty dataset");
  for (int f = 0; f < kObsDim; ++f) {
    dataset.feature_mean[f] = sum[f] / count;
    const double var = sq[f] / count - dataset.feature_mean[f] * dataset.feature_mean[f];
    dataset.feature_std[f] = std::max(std::sqrt(var > 0.0 ? var : 0.0), kStdFloor);
  }
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);

  nlohmann::json header;
  header["format"] = "retrial-demos";
  header["version"] = 1;
  header["variant"] = to_string(dataset.meta.variant);
  header["seed"] = dataset.meta.seed;
  header["count"] = dataset.meta.count;
  header["mean_length"] = dataset.meta.mean_length;
  header["feature_mean"] = dataset.feature_mean;
  header["feature_std"] = dataset.feature_std;
  out << header.dump() << "\n";

  int id = 0;
  for (const auto& traj : dataset.trajectories) {
    nlohmann::json j;
    j["id"] = id++;
    j["hidden"] = hidden_to_json(traj.hidden_record);
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& tr : traj.transitions) {
      nlohmann::json s;
      s["obs"] = tr.obs;
      s["proprio"] = {tr.proprio.x, tr.proprio.y, tr.proprio.gripper};
      s["action"] = {tr.action.x, tr.action.y, tr.action.gripper};
      s["reward"] = tr.reward;
      steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    out << j.dump() << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);

  std::string line;
  int line_no = 0;

  auto parse_line = [&](const std::string& text) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("dataset: ") + e.what(), line_no);
    }
  };

  if (!std::getline(in, line)) throw ParseError("dataset: empty file", 1);
  ++line_no;
  nlohmann::json header = parse_line(line);
  if (!header.contains("format") || header["format"] != "retrial-demos")
    throw ParseError("dataset: bad magic header", line_no);
  if (!header.contains("version") || header["version"].get<int>() != 1)
    throw ParseError("dataset: unsupported version " +
                         (header.contains("version") ? header["version"].dump() : "<missing>"),
                     line_no);

  Dataset out;
  try {
    out.meta.variant = variant_from_string(header.at("variant").get<std::string>());
    out.meta.seed = header.at("seed").get<std::uint64_t>();
    out.meta.count = header.at("count").get<int>();
    out.meta.mean_length = header.at("mean_length").get<double>();
    const auto& fm = header.at("feature_mean");
    const auto& fs = header.at("feature_std");
    if (fm.size() != kObsDim || fs.size() != kObsDim)
      throw ParseError("dataset: feature stats must have 15 entries", line_no);
    for (int f = 0; f < kObsDim; ++f) {
      out.feature_mean[f] = fm[f].get<double>();
      out.feature_std[f] = fs[f].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset header: ") + e.what(), line_no);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = parse_line(line);
    Trajectory traj;
    try {
      traj.hidden_record = hidden_from_json(j.at("hidden"));
      const auto& steps = j.at("steps");
      int t = 0;
      for (const auto& s : steps) {
        Transition tr;
        const auto& obs = s.at("obs");
        if (obs.size() != kObsDim) throw ParseError("dataset: obs must have 15 entries", line_no);
        for (int f = 0; f < kObsDim; ++f) tr.obs[f] = obs[f].get<double>();
        const auto& pr = s.at("proprio");
        tr.proprio = {pr[0].get<double>(), pr[1].get<double>(), pr[2].get<double>()};
        const auto& ac = s.at("action");
        tr.action = {ac[0].get<double>(), ac[1].get<double>(), ac[2].get<double>()};
        tr.reward = s.at("reward").get<double>();
        tr.t = t++;
        traj.transitions.push_back(std::move(tr));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("dataset trajectory: ") + e.what(), line_no);
    }
    if (traj.transitions.empty()) throw ParseError("dataset: trajectory with no steps", line_no);
    traj.success = true;
    traj.transitions.back().events.add(Event::Success);
    validate_trajectory(traj);
    out.trajectories.push_back(std::move(traj));
  }

  if (static_cast<int>(out.trajectories.size()) != out.meta.count)
    throw ParseError("dataset: truncated file, header count " + std::to_string(out.meta.count) +
                         " but read " + std::to_string(out.trajectories.size()),
                     line_no);
  return out;
}

std::uint64_t dataset_hash(const Dataset& dataset) {
  // FNV-1a over the raw bit patterns of every numeric field.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t bits) {
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    mix(bits);
  };
  mix(dataset.trajectories.size());
  for (const auto& traj : dataset.trajectories) {
    mix(traj.transitions.size());
    for (const auto& tr : traj.transitions) {
      for (double v : tr.obs) mix_double(v);
      mix_double(tr.action.x);
      mix_double(tr.action.y);
      mix_double(tr.action.gripper);
      mix_double(tr.reward);
    }
  }
  return h;
}

}  // namespace retrial
