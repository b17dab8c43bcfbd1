#pragma once

#include <span>
#include <string>
#include <vector>

#include "retrial/demogen.hpp"
#include "retrial/dist.hpp"
#include "retrial/types.hpp"

namespace retrial {

enum class Backend { scalar, categorical };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int steps = 20000;
  std::uint64_t seed = 0;
  double gamma = 1.0;  // scalar-backend label discount
};

// Two-layer tanh network over the standardized 15-feature observation.
// Output is one unit (scalar return estimate) or 50 logits fed through a
// softmax (categorical progress estimate).
struct ValueModel {
  Backend backend = Backend::categorical;
  int in_dim = kObsDim;
  int hidden_dim = 64;
  int out_dim = kValueBins;
  std::vector<double> w1;  // hidden_dim x in_dim, row-major
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // out_dim x hidden_dim, row-major
  std::vector<double> b2;  // out_dim
  std::array<double, kObsDim> feature_mean{};
  std::array<double, kObsDim> feature_std{};
  std::uint64_t dataset_hash = 0;
  int trained_steps = 0;
  std::uint64_t train_seed = 0;
};

// Remaining-step return label: sum of gamma^i * (-1) over the steps left
// before success, with the terminal success state worth 0. For gamma = 1
// this is -(T - t).
double scalar_target(const Trajectory& traj, int t, double gamma = 1.0);

// Soft three-bin label: b = round(50 * t / T) clamped to [0, 49], mass 1/3
// on b-1, b, b+1; bins falling outside the support are dropped and the
// rest renormalized.
CategoricalValueDist categorical_target(int t, int T);
CategoricalValueDist categorical_target(const Trajectory& traj, int t);

struct Batch {
  std::vector<Observation> obs;
  std::vector<double> scalar_targets;               // scalar backend
  std::vector<CategoricalValueDist> cat_targets;    // categorical backend
};

// Flattened parameter order: w1, b1, w2, b2.
std::size_t param_count(const ValueModel& m);
std::vector<double> get_params(const ValueModel& m);
void set_params(ValueModel& m, std::span<const double> params);

// Mean loss over the batch: squared error (scalar) or cross-entropy to the
// soft target (categorical).
double batch_loss(const ValueModel& m, const Batch& batch);

// Same loss, plus the analytic gradient in the flattened parameter order.
double batch_loss_grad(const ValueModel& m, const Batch& batch, std::vector<double>& grad);

struct TrainReport {
  std::vector<double> losses;  // one entry per gradient step
};

// Minibatch stochastic gradient training (Adam steps on the analytic
// gradient), deterministic given (dataset, cfg.seed).
ValueModel train(const Dataset& dataset, Backend backend, const TrainConfig& cfg,
                 TrainReport* report = nullptr);

double predict_scalar(const ValueModel& m, const Observation& obs);
CategoricalValueDist predict_categorical(const ValueModel& m, const Observation& obs);

// Spearman rank correlation with average ranks for ties; 0 when either
// side is constant.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

// Per-trajectory rank correlation between step index and predicted value
// (dist_mean of the prediction for the categorical backend).
std::vector<double> monotonicity_report(const ValueModel& m, const Dataset& demos);

void write_model(const ValueModel& m, const std::string& path);
ValueModel read_model(const std::string& path);

}  // namespace retrial
