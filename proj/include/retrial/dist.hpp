#pragma once

#include <array>

#include "retrial/errors.hpp"

namespace retrial {

inline constexpr int kValueBins = 50;
inline constexpr double kBinWidth = 0.02;  // each bin covers 2% of task progress

// Probability vector over task-progress fraction; bin i covers
// [0.02*i, 0.02*(i+1)) with its center at 0.02*i + 0.01.
struct CategoricalValueDist {
  std::array<double, kValueBins> p{};
};

// Distribution of a bin-index difference A - B over integer support
// -49..+49; q[i] is the mass at difference i - 49. One unit equals one
// bin, i.e. 2% of progress.
inline constexpr int kSignedSupport = 2 * kValueBins - 1;

struct SignedBinDist {
  static constexpr int kOffset = kValueBins - 1;  // index of difference 0
  std::array<double, kSignedSupport> q{};

  double at(int diff) const { return q[diff + kOffset]; }
  double& at(int diff) { return q[diff + kOffset]; }
};

void validate_dist(const CategoricalValueDist& d);
void validate_dist(const SignedBinDist& d);

// Bin-center expectation, as a progress fraction in [0, 1].
double dist_mean(const CategoricalValueDist& d);

// Mean of the signed difference, in bin units.
double dist_mean_bins(const SignedBinDist& d);

// Population standard deviation over the integer support, in bin units.
double dist_std(const SignedBinDist& d);

// Distribution of (A - B) for independent A ~ now, B ~ past.
SignedBinDist dist_delta(const CategoricalValueDist& now, const CategoricalValueDist& past);

// (mean + z * std) converted from bin units to progress fraction.
double upper_bound(const SignedBinDist& d, double z);

}  // namespace retrial
