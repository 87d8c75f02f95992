#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "irdd/isotonic.hpp"
#include "irdd/sample.hpp"

namespace irdd {

// Reference offset scale: boundary evaluation at cstar * A * n^{-1/3}
// minimizes the limiting mean squared error (A is the oracle constant
// computed by optimal_c_eval_* below).
inline constexpr double kCStar = 0.345;

// Which sample size enters the boundary offset c * n^{-a}: each side's own
// count, or the pooled count across both sides. Estimates are defined either
// way; table reproductions are calibrated against the pooled convention.
enum class OffsetConvention { per_side, pooled };

struct RddConfig {
  double cutoff = 0.0;
  double c = 1.0;        // offset scale, > 0
  double a = 1.0 / 3.0;  // offset exponent in (0,1); 1/2 for inference
  // Monotone direction of the regression function on each side of the cutoff.
  bool increasing_left = true;
  bool increasing_right = true;
  OffsetConvention offsets = OffsetConvention::per_side;

  void validate() const;  // throws std::invalid_argument
};

struct RddEstimate {
  double theta = 0;  // m_plus - m_minus, or the ratio estimate when fuzzy
  double m_minus = 0, m_plus = 0;
  std::optional<double> p_minus, p_plus;  // treatment levels, fuzzy only
  // Uncorrected estimate evaluated at the extreme order statistics; absent
  // for baseline methods and for fuzzy fits with a degenerate denominator.
  std::optional<double> naive_theta;
  double eval_minus = 0, eval_plus = 0;  // evaluation points, absolute x
  std::size_t n_minus = 0, n_plus = 0;
  bool clamped_minus = false, clamped_plus = false;  // eval beyond the data
};

// Boundary value of the non-decreasing fit at an explicit offset from the
// boundary. *_left: sample supported right of its boundary at x=0, evaluated
// at +offset. *_right: support left of x=0, evaluated at -offset.
double boundary_value_left(const Sample& side, double offset);
double boundary_value_right(const Sample& side, double offset);

// The same with offset = c * n^{-a}, n the side's own size. c > 0, a in (0,1).
double boundary_corrected_left(const Sample& side, double c, double a);
double boundary_corrected_right(const Sample& side, double c, double a);

// Discontinuity estimate at cfg.cutoff: rows with x >= cutoff form the right
// (treated) side. Each side is fit separately and evaluated c * n^{-a} inside
// its support; evaluation points beyond a side's data clamp to the extreme
// fitted level and set the side's clamp flag.
RddEstimate sharp_estimate(const Sample& s, const RddConfig& cfg);

// Ratio of the outcome jump to the treatment-probability jump, both estimated
// as above (treatment channel required). Throws weak_discontinuity_error when
// |p_plus - p_minus| < 1e-8.
RddEstimate fuzzy_estimate(const Sample& s, const RddConfig& cfg);

// Two-sided fit with the levels frozen within c * n^{-1/2} of the cutoff:
//   x - cutoff <  -eps_minus -> left fit at x
//   x - cutoff in [-eps_minus, 0) -> left fit at -eps_minus
//   x - cutoff in [0, eps_plus]   -> right fit at +eps_plus
//   x - cutoff >  eps_plus   -> right fit at x
struct TrimmedFit {
  StepFit left, right;  // fits in cutoff-shifted coordinates
  double cutoff = 0;
  double eps_minus = 0, eps_plus = 0;
  double frozen_minus = 0, frozen_plus = 0;
  bool increasing_left = true, increasing_right = true;

  double operator()(double x) const;
};

// Builds the trimmed fit from cfg.c / cfg.offsets (the exponent is 1/2
// regardless of cfg.a; trimming is an inference device).
TrimmedFit trimmed_fit(const Sample& s, const RddConfig& cfg);

// y_i - trimmed(x_i) for every row of `s`, in the order the rows appear.
std::vector<double> trimmed_residuals(const TrimmedFit& fit, const Sample& s);

// Boundary value at the MSE-optimal offset kCStar * A * n^{-1/3}, where
// A = (2/slope * sqrt(sigma2/density))^{2/3} from oracle boundary constants.
// slope, sigma2 and density must be positive.
double optimal_c_eval_left(const Sample& side, double slope, double sigma2, double density);
double optimal_c_eval_right(const Sample& side, double slope, double sigma2, double density);

}  // namespace irdd
