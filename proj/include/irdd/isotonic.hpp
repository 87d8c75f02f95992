#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "irdd/sample.hpp"

namespace irdd {

// One level set of an isotonic fit. [lo, hi) indexes the x-sorted sample,
// weight counts the pooled observations, value is their mean response.
struct Block {
  std::size_t lo, hi;
  double weight;
  double value;
};

// Non-decreasing step function. knots are the distinct x-values in increasing
// order; values[i] is the fitted level at knots[i]. Blocks partition the
// sorted sample into the level sets behind those values.
struct StepFit {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<Block> blocks;
};

enum class Channel { outcome, treatment };

// Least-squares non-decreasing fit by pooling adjacent violators. Ties in x
// are merged into weighted pseudo-observations first; adjacent blocks with
// equal means stay separate (only strict decreases pool).
StepFit pava_fit(const Sample& s, Channel channel = Channel::outcome);

// Piecewise-constant, left-continuous evaluation with clamping:
//   at <= knots.front()        -> values.front()
//   knots[i] < at <= knots[i+1] -> values[i+1]
//   at >  knots.back()         -> values.back()
double eval_step(const StepFit& fit, double at);

// Smallest prefix mean over the x-sorted sample; equals the isotonic fit at
// the smallest x. naive_boundary_right mirrors it (largest suffix mean).
double naive_boundary_left(const Sample& s);
double naive_boundary_right(const Sample& s);

// Cumulative sum diagram: over the distinct x-values t_1 < ... < t_K,
//   u[k] = #{x_i <= t_k} / n,   v[k] = sum{y_i : x_i <= t_k} / n,
// with the origin (0,0) prepended. u is strictly increasing and ends at 1.
struct CumSumDiagram {
  std::vector<double> u, v;
};
CumSumDiagram cumsum_diagram(const Sample& s, Channel channel = Channel::outcome);

// Left derivative at u = at of the greatest convex minorant of the points
// (u[k], v[k]). Requires u strictly increasing, sizes >= 2 and
// u.front() < at <= u.back(); throws std::out_of_range otherwise.
double gcm_left_derivative(const std::vector<double>& u, const std::vector<double>& v,
                           double at);
double gcm_left_derivative(const CumSumDiagram& diagram, double at);

// Both sides of the switching relation: first = (fit value at x <= level),
// second = (U_n(level) >= x) where U_n(a) is the rightmost maximizer of
// a*F_n(s) - M_n(s) over s in {before the sample} u {distinct x values};
// the pre-sample candidate carries value 0 and compares as -infinity.
// Maximizer ties within floating tolerance resolve to the rightmost s.
std::pair<bool, bool> verify_switching(const Sample& s, double level, double x);

}  // namespace irdd
