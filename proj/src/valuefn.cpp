#include "retrial/valuefn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "retrial/rng.hpp"

namespace retrial {

namespace {

struct ForwardPass {
  std::array<double, kObsDim> xs{};  // standardized input
  std::vector<double> h;             // tanh activations
  std::vector<double> out;           // raw outputs / logits
};

void forward(const ValueModel& m, const Observation& obs, ForwardPass& f) {
  for (int i = 0; i < m.in_dim; ++i) f.xs[i] = (obs[i] - m.feature_mean[i]) / m.feature_std[i];
  f.h.assign(m.hidden_dim, 0.0);
  for (int j = 0; j < m.hidden_dim; ++j) {
    double z = m.b1[j];
    const double* row = &m.w1[static_cast<std::size_t>(j) * m.in_dim];
    for (int i = 0; i < m.in_dim; ++i) z += row[i] * f.xs[i];
    f.h[j] = std::tanh(z);
  }
  f.out.assign(m.out_dim, 0.0);
  for (int o = 0; o < m.out_dim; ++o) {
    double z = m.b2[o];
    const double* row = &m.w2[static_cast<std::size_t>(o) * m.hidden_dim];
    for (int j = 0; j < m.hidden_dim; ++j) z += row[j] * f.h[j];
    f.out[o] = z;
  }
}

// log-softmax through logsumexp; fills probs as a side product.
double logsumexp(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

std::size_t check_backend_batch(const ValueModel& m, const Batch& batch) {
  const std::size_t n = batch.obs.size();
  if (n == 0) throw ValidationError("batch is empty");
  if (m.backend == Backend::scalar) {
    if (batch.scalar_targets.size() != n) throw ValidationError("batch scalar target count mismatch");
  } else {
    if (batch.cat_targets.size() != n) throw ValidationError("batch categorical target count mismatch");
  }
  return n;
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::scalar ? "scalar" : "categorical"; }

Backend backend_from_string(const std::string& s) {
  if (s == "scalar") return Backend::scalar;
  if (s == "categorical") return Backend::categorical;
  throw ValidationError("unknown backend: " + s);
}

double scalar_target(const Trajectory& traj, int t, double gamma) {
  if (!traj.success) throw ValidationError("scalar_target: trajectory is not successful");
  const int T = traj.length();
  if (t < 0 || t > T - 1) throw ValidationError("scalar_target: t out of range");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("scalar_target: gamma must be in (0,1]");
  // Horner evaluation of sum_{i=0}^{T-t-1} gamma^i * (-1), terminal worth 0.
  double g = 0.0;
  for (int i = 0; i < T - t; ++i) g = -1.0 + gamma * g;
  return g;
}

CategoricalValueDist categorical_target(int t, int T) {
  if (T < 1 || t < 0 || t > T) throw ValidationError("categorical_target: t out of range");
  const int b = std::clamp(static_cast<int>(std::lround(kValueBins * static_cast<double>(t) / T)), 0,
                           kValueBins - 1);
  CategoricalValueDist d;
  double mass = 0.0;
  for (int bin : {b - 1, b, b + 1}) {
    if (bin >= 0 && bin < kValueBins) {
      d.p[bin] = 1.0 / 3.0;
      mass += 1.0 / 3.0;
    }
  }
  for (double& v : d.p) v /= mass;
  return d;
}

CategoricalValueDist categorical_target(const Trajectory& traj, int t) {
  if (!traj.success) throw ValidationError("categorical_target: trajectory is not successful");
  const int T = traj.length();
  if (t < 0 || t > T - 1) throw ValidationError("categorical_target: t out of range");
  return categorical_target(t, T);
}

std::size_t param_count(const ValueModel& m) {
  return static_cast<std::size_t>(m.hidden_dim) * m.in_dim + m.hidden_dim +
         static_cast<std::size_t>(m.out_dim) * m.hidden_dim + m.out_dim;
}

std::vector<double> get_params(const ValueModel& m) {
  std::vector<double> p;
  p.reserve(param_count(m));
  p.insert(p.end(), m.w1.begin(), m.w1.end());
  p.insert(p.end(), m.b1.begin(), m.b1.end());
  p.insert(p.end(), m.w2.begin(), m.w2.end());
  p.insert(p.end(), m.b2.begin(), m.b2.end());
  return p;
}

void set_params(ValueModel& m, std::span<const double> params) {
  if (params.size() != param_count(m)) throw ValidationError("set_params: size mismatch");
  auto it = params.begin();
  auto take = [&](std::vector<double>& dst, std::size_t n) {
    dst.assign(it, it + static_cast<std::ptrdiff_t>(n));
    it += static_cast<std::ptrdiff_t>(n);
  };
  take(m.w1, static_cast<std::size_t>(m.hidden_dim) * m.in_dim);
  take(m.b1, m.hidden_dim);
  take(m.w2, static_cast<std::size_t>(m.out_dim) * m.hidden_dim);
  take(m.b2, m.out_dim);
}

double batch_loss(const ValueModel& m, const Batch& batch) {
  const std::size_t n = check_backend_batch(m, batch);
  ForwardPass f;
  double loss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    forward(m, batch.obs[s], f);
    if (m.backend == Backend::scalar) {
      const double e = f.out[0] - batch.scalar_targets[s];
      loss += e * e;
    } else {
      const double lse = logsumexp(f.out);
      double ce = 0.0;
      for (int o = 0; o < m.out_dim; ++o) {
        const double target = batch.cat_targets[s].p[o];
        if (target > 0.0) ce -= target * (f.out[o] - lse);
      }
      loss += ce;
    }
  }
  return loss / static_cast<double>(n);
}

double batch_loss_grad(const ValueModel& m, const Batch& batch, std::vector<double>& grad) {
  const std::size_t n = check_backend_batch(m, batch);
  grad.assign(param_count(m), 0.0);

  const std::size_t w1_off = 0;
  const std::size_t b1_off = static_cast<std::size_t>(m.hidden_dim) * m.in_dim;
  const std::size_t w2_off = b1_off + m.hidden_dim;
  const std::size_t b2_off = w2_off + static_cast<std::size_t>(m.out_dim) * m.hidden_dim;

  ForwardPass f;
  std::vector<double> dout(m.out_dim), dh(m.hidden_dim);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t s = 0; s < n; ++s) {
    forward(m, batch.obs[s], f);

    if (m.backend == Backend::scalar) {
      const double e = f.out[0] - batch.scalar_targets[s];
      loss += e * e;
      dout[0] = 2.0 * e * inv_n;
    } else {
      const double lse = logsumexp(f.out);
      double ce = 0.0;
      for (int o = 0; o < m.out_dim; ++o) {
        const double target = batch.cat_targets[s].p[o];
        const double prob = std::exp(f.out[o] - lse);
        if (target > 0.0) ce -= target * (f.out[o] - lse);
        dout[o] = (prob - target) * inv_n;
      }
      loss += ce;
    }

    std::fill(dh.begin(), dh.end(), 0.0);
    for (int o = 0; o < m.out_dim; ++o) {
      const double g = dout[o];
      if (g == 0.0) continue;
      double* w2g = &grad[w2_off + static_cast<std::size_t>(o) * m.hidden_dim];
      const double* w2row = &m.w2[static_cast<std::size_t>(o) * m.hidden_dim];
      for (int j = 0; j < m.hidden_dim; ++j) {
        w2g[j] += g * f.h[j];
        dh[j] += g * w2row[j];
      }
      grad[b2_off + o] += g;
    }
    for (int j = 0; j < m.hidden_dim; ++j) {
      const double dz = dh[j] * (1.0 - f.h[j] * f.h[j]);
      if (dz == 0.0) continue;
      double* w1g = &grad[w1_off + static_cast<std::size_t>(j) * m.in_dim];
      for (int i = 0; i < m.in_dim; ++i) w1g[i] += dz * f.xs[i];
      grad[b1_off + j] += dz;
    }
  }
  return loss * inv_n;
}

ValueModel train(const Dataset& dataset, Backend backend, const TrainConfig& cfg,
                 TrainReport* report) {
  if (dataset.trajectories.empty()) throw ConfigError("train: dataset is empty");
  if (cfg.learning_rate <= 0.0 || cfg.batch_size < 1 || cfg.steps < 1)
    throw ConfigError("train: config values must be positive");

  ValueModel m;
  m.backend = backend;
  m.out_dim = backend == Backend::scalar ? 1 : kValueBins;
  m.feature_mean = dataset.feature_mean;
  m.feature_std = dataset.feature_std;
  m.dataset_hash = dataset_hash(dataset);
  m.train_seed = cfg.seed;

  // Glorot-uniform init, zero biases.
  SeedStream init_rng(cfg.seed, 0x56494e49ull);  // "VINI"
  auto glorot = [&](std::vector<double>& w, int fan_in, int fan_out) {
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    w.resize(static_cast<std::size_t>(fan_in) * fan_out);
    for (double& v : w) v = init_rng.uniform(-lim, lim);
  };
  glorot(m.w1, m.in_dim, m.hidden_dim);
  m.b1.assign(m.hidden_dim, 0.0);
  glorot(m.w2, m.hidden_dim, m.out_dim);
  m.b2.assign(m.out_dim, 0.0);

  // Flattened (trajectory, t) positions; batches sample uniformly over them.
  std::vector<std::pair<int, int>> positions;
  for (int k = 0; k < static_cast<int>(dataset.trajectories.size()); ++k) {
    for (int t = 0; t < dataset.trajectories[k].length(); ++t) positions.emplace_back(k, t);
  }

  SeedStream batch_rng(cfg.seed, 0x56424154ull);  // "VBAT"
  Batch batch;
  batch.obs.resize(cfg.batch_size);
  if (backend == Backend::scalar)
    batch.scalar_targets.resize(cfg.batch_size);
  else
    batch.cat_targets.resize(cfg.batch_size);

  // Adam on the analytic gradient.
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<double> params = get_params(m);
  std::vector<double> grad, mom(params.size(), 0.0), vel(params.size(), 0.0);

  if (report) report->losses.reserve(cfg.steps);

  for (int step = 0; step < cfg.steps; ++step) {
    for (int b = 0; b < cfg.batch_size; ++b) {
      const auto [k, t] = positions[batch_rng.uniform_int(positions.size())];
      const Trajectory& traj = dataset.trajectories[k];
      batch.obs[b] = traj.transitions[t].obs;
      if (backend == Backend::scalar)
        batch.scalar_targets[b] = scalar_target(traj, t, cfg.gamma);
      else
        batch.cat_targets[b] = categorical_target(traj, t);
    }

    const double loss = batch_loss_grad(m, batch, grad);
    if (!std::isfinite(loss)) throw TrainingError("train: non-finite loss", step);
    if (report) report->losses.push_back(loss);

    const double bc1 = 1.0 - std::pow(beta1, step + 1);
    const double bc2 = 1.0 - std::pow(beta2, step + 1);
    for (std::size_t i = 0; i < params.size(); ++i) {
      mom[i] = beta1 * mom[i] + (1.0 - beta1) * grad[i];
      vel[i] = beta2 * vel[i] + (1.0 - beta2) * grad[i] * grad[i];
      params[i] -= cfg.learning_rate * (mom[i] / bc1) / (std::sqrt(vel[i] / bc2) + eps);
    }
    set_params(m, params);
  }

  m.trained_steps = cfg.steps;
  return m;
}

double predict_scalar(const ValueModel& m, const Observation& obs) {
  if (m.backend != Backend::scalar) throw ValidationError("predict_scalar: model is categorical");
  validate_observation(obs);
  ForwardPass f;
  forward(m, obs, f);
  return f.out[0];
}

CategoricalValueDist predict_categorical(const ValueModel& m, const Observation& obs) {
  if (m.backend != Backend::categorical) throw ValidationError("predict_categorical: model is scalar");
  validate_observation(obs);
  ForwardPass f;
  forward(m, obs, f);
  const double lse = logsumexp(f.out);
  CategoricalValueDist d;
  double sum = 0.0;
  for (int o = 0; o < kValueBins; ++o) {
    d.p[o] = std::exp(f.out[o] - lse);
    sum += d.p[o];
  }
  for (double& v : d.p) v /= sum;
  return d;
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw ValidationError("spearman: need two equal-length series");

  auto ranks = [](std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> monotonicity_report(const ValueModel& m, const Dataset& demos) {
  std::vector<double> out;
  out.reserve(demos.trajectories.size());
  for (const auto& traj : demos.trajectories) {
    std::vector<double> steps(traj.length()), values(traj.length());
    for (int t = 0; t < traj.length(); ++t) {
      steps[t] = t;
      values[t] = m.backend == Backend::scalar
                      ? predict_scalar(m, traj.transitions[t].obs)
                      : dist_mean(predict_categorical(m, traj.transitions[t].obs));
    }
    out.push_back(spearman_correlation(steps, values));
  }
  return out;
}

void write_model(const ValueModel& m, const std::string& path) {
  nlohmann::json j;
  j["format"] = "retrial-value";
  j["version"] = 1;
  j["backend"] = to_string(m.backend);
  j["in_dim"] = m.in_dim;
  j["hidden_dim"] = m.hidden_dim;
  j["out_dim"] = m.out_dim;
  j["w1"] = m.w1;
  j["b1"] = m.b1;
  j["w2"] = m.w2;
  j["b2"] = m.b2;
  j["feature_mean"] = m.feature_mean;
  j["feature_std"] = m.feature_std;
  char hash_hex[19];
  std::snprintf(hash_hex, sizeof(hash_hex), "0x%016llx",
                static_cast<unsigned long long>(m.dataset_hash));
  j["metadata"] = {{"dataset_hash", hash_hex}, {"steps", m.trained_steps}, {"seed", m.train_seed}};

  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw ParseError("write failed: " + path);
}

ValueModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (!j.contains("format") || j["format"] != "retrial-value")
    throw ParseError("model: bad magic header");
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw ParseError("model: unsupported version");

  ValueModel m;
  try {
    m.backend = backend_from_string(j.at("backend").get<std::string>());
    m.in_dim = j.at("in_dim").get<int>();
    m.hidden_dim = j.at("hidden_dim").get<int>();
    m.out_dim = j.at("out_dim").get<int>();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    const auto& fm = j.at("feature_mean");
    const auto& fs = j.at("feature_std");
    if (fm.size() != kObsDim || fs.size() != kObsDim || m.in_dim != kObsDim)
      throw ParseError("model: feature dimension must be 15");
    for (int f = 0; f < kObsDim; ++f) {
      m.feature_mean[f] = fm[f].get<double>();
      m.feature_std[f] = fs[f].get<double>();
    }
    const auto& meta = j.at("metadata");
    m.dataset_hash = std::stoull(meta.at("dataset_hash").get<std::string>(), nullptr, 16);
    m.trained_steps = meta.at("steps").get<int>();
    m.train_seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (m.w1.size() != static_cast<std::size_t>(m.hidden_dim) * m.in_dim ||
      m.b1.size() != static_cast<std::size_t>(m.hidden_dim) ||
      m.w2.size() != static_cast<std::size_t>(m.out_dim) * m.hidden_dim ||
      m.b2.size() != static_cast<std::size_t>(m.out_dim))
    throw ParseError("model: weight array sizes inconsistent with layer shapes");
  if ((m.backend == Backend::scalar && m.out_dim != 1) ||
      (m.backend == Backend::categorical && m.out_dim != kValueBins))
    throw ParseError("model: backend and out_dim disagree");
  return m;
}

}  // namespace retrial
