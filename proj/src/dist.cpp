#include "retrial/dist.hpp"

#include <cmath>

namespace retrial {

namespace {

constexpr double kSumTol = 1e-9;

template <typename Array>
void check_mass(const Array& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(std::string(what) + ": negative or non-finite mass");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTol) throw ValidationError(std::string(what) + ": mass does not sum to 1");
}

}  // namespace

void validate_dist(const CategoricalValueDist& d) { check_mass(d.p, "categorical value distribution"); }

void validate_dist(const SignedBinDist& d) { check_mass(d.q, "signed bin distribution"); }

double dist_mean(const CategoricalValueDist& d) {
  validate_dist(d);
  double m = 0.0;
  for (int i = 0; i < kValueBins; ++i) m += d.p[i] * (kBinWidth * i + kBinWidth / 2.0);
  return m;
}

double dist_mean_bins(const SignedBinDist& d) {
  validate_dist(d);
  double m = 0.0;
  for (int i = 0; i < kSignedSupport; ++i) m += d.q[i] * (i - SignedBinDist::kOffset);
  return m;
}

double dist_std(const SignedBinDist& d) {
  validate_dist(d);
  double mean = 0.0;
  for (int i = 0; i < kSignedSupport; ++i) mean += d.q[i] * (i - SignedBinDist::kOffset);
  double var = 0.0;
  for (int i = 0; i < kSignedSupport; ++i) {
    const double dev = (i - SignedBinDist::kOffset) - mean;
    var += d.q[i] * dev * dev;
  }
  return std::sqrt(var < 0.0 ? 0.0 : var);
}

SignedBinDist dist_delta(const CategoricalValueDist& now, const CategoricalValueDist& past) {
  validate_dist(now);
  validate_dist(past);
  SignedBinDist out;
  for (int a = 0; a < kValueBins; ++a) {
    if (now.p[a] == 0.0) continue;
    for (int b = 0; b < kValueBins; ++b) {
      out.at(a - b) += now.p[a] * past.p[b];
    }
  }
  return out;
}

double upper_bound(const SignedBinDist& d, double z) {
  if (!std::isfinite(z) || z < 0.0) throw ValidationError("upper_bound: z must be finite and >= 0");
  return (dist_mean_bins(d) + z * dist_std(d)) * kBinWidth;
}

}  // namespace retrial
