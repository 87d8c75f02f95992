#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "irdd/rdd.hpp"
#include "irdd/sample.hpp"

namespace irdd::boot {

// Multiplier laws, all with mean 0 and variance 1. The two-point law places
// -(sqrt5-1)/2 and (sqrt5+1)/2 with probabilities (sqrt5+1)/(2 sqrt5) and
// (sqrt5-1)/(2 sqrt5).
enum class Multiplier { rademacher, gaussian, mammen };

std::vector<double> draw_multipliers(Multiplier kind, std::size_t n, std::mt19937_64& rng);

// Interval construction from the recentred replicates t_b = theta*_b - theta:
//   recenter:   [theta - q_{1-alpha/2}(t), theta - q_{alpha/2}(t)]
//   percentile: [theta + q_{alpha/2}(t),   theta + q_{1-alpha/2}(t)]
enum class CiFlavor { recenter, percentile };

struct BootstrapConfig {
  double cutoff = 0.0;
  double c = 1.0;
  double a = 0.5;  // trim exponent; boundary_wild_ci only, must lie in (1/3, 1)
  std::size_t reps = 999;
  double level = 0.95;
  Multiplier multiplier = Multiplier::rademacher;
  CiFlavor flavor = CiFlavor::recenter;
  std::uint64_t seed = 0;
  OffsetConvention offsets = OffsetConvention::per_side;
  bool increasing_left = true, increasing_right = true;

  void validate() const;
};

struct BootstrapReport {
  double point = 0;  // the estimate the interval is built around
  double lower = 0, upper = 0;
  double level = 0.95;
  std::size_t reps = 0;
  std::vector<double> replicates;  // theta*_b - point, one entry per replicate
  bool low_reps_warning = false;   // reps < 100
  double c = 1.0, a = 0.5;
  Multiplier multiplier = Multiplier::rademacher;
  CiFlavor flavor = CiFlavor::recenter;
  std::uint64_t seed = 0;
};

// Wild bootstrap interval for the discontinuity at cfg.cutoff. Residuals come
// from the trimmed fit, bootstrap outcomes are trimmed-fit values plus
// multiplier-scaled residuals, and each replicate re-estimates both boundary
// values at c * n^{-1/2}. Replicate b draws from stream b of cfg.seed, so any
// execution order gives the same replicate set.
BootstrapReport sharp_wild_ci(const Sample& s, const BootstrapConfig& cfg);

// One-sided analog for the boundary value at c * n^{-a} of a sample whose
// boundary of interest is x = 0 with support to the right.
BootstrapReport boundary_wild_ci(const Sample& side, const BootstrapConfig& cfg);

// Uncorrected variant: residuals from the untrimmed side fits and evaluation
// at the extreme order statistics. Kept as the negative control; its
// replicate law does not track the estimator's.
BootstrapReport naive_wild_ci(const Sample& s, const BootstrapConfig& cfg);

}  // namespace irdd::boot
