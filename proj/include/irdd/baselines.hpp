#pragma once

#include <cstddef>

#include "irdd/rdd.hpp"
#include "irdd/sample.hpp"

namespace irdd::baselines {

// Largest k with k^3 <= n (an exact integer cube root, so floor(n^{1/3})
// without floating-point edge cases).
std::size_t default_k(std::size_t n);

// Mean outcome of the k observations nearest to `boundary`; observations
// tied with the k-th distance are all included and averaged. 1 <= k <= n.
double knn_boundary(const Sample& side, double boundary, std::size_t k);

struct LocalLinearConfig {
  double bandwidth = 0;  // <= 0 selects the rule of thumb below
};

// 1.06 * sd(x) * n^{-1/5}; requires at least two distinct x.
double rule_of_thumb_bandwidth(const Sample& side);

// Triangular-kernel local linear regression evaluated at `boundary`:
// weighted least squares of y on (1, x - boundary) with weights
// (1 - |x - boundary|/h)_+, returning the intercept. Throws
// degenerate_window_error without two distinct x carrying positive weight.
double local_linear_boundary(const Sample& side, double boundary,
                             const LocalLinearConfig& cfg = {});

enum class BaselineMethod { knn, local_linear };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::knn;
  std::size_t k = 0;       // 0: floor(pooled n^{1/3}), capped at each side's size
  double bandwidth = 0.0;  // <= 0: per-side rule of thumb
};

// Difference of per-side baseline boundary values at the cutoff (rows with
// x >= cutoff form the plus side). naive_theta is left unset.
RddEstimate sharp_baseline_estimate(const Sample& s, double cutoff,
                                    const BaselineConfig& cfg = {});

}  // namespace irdd::baselines
