#pragma once

#include <cstdint>
#include <vector>

#include "irdd/mc.hpp"

namespace irdd::limits {

// Euler grid for the driving Brownian motion. Two-sided draws walk the grid
// on both sides of 0; one-sided draws use [0, horizon].
struct ProcessGrid {
  double dt = 1e-3;
  double horizon = 3.0;
  void validate() const;
};

inline ProcessGrid chernoff_grid() { return {1e-3, 3.0}; }
inline ProcessGrid boundary_grid() { return {1e-3, 5.0}; }

// argmax over t of W_t - t^2 on [-horizon, horizon]. Pure in (seed, grid);
// the two sides use separate sub-streams of `seed`, so enlarging the horizon
// keeps the shared part of the path fixed.
double chernoff_draw(std::uint64_t seed, const ProcessGrid& grid = chernoff_grid());

// Limit families for the boundary estimate at c * n^{-a}:
//   interior_chernoff: a < 1/3, |4 slope sigma2 / density|^{1/3} * Chernoff argmax
//   boundary_third:    a = 1/3, left GCM slope at 1 of
//                      sqrt(sigma2/(c density)) W_t + (t^2 c / 2) slope on [0, horizon)
//   boundary_fast:     a in (1/3, 1), same without the parabola
enum class Regime { interior_chernoff, boundary_third, boundary_fast };

struct LimitSpec {
  Regime regime = Regime::boundary_third;
  double sigma2 = 1.0;
  double density = 1.0;
  double slope = 0.0;
  double c = 1.0;
  void validate() const;
};

// One draw of the right-boundary law (left derivative of the GCM at +1).
double limit_draw(const LimitSpec& spec, std::uint64_t seed,
                  const ProcessGrid& grid = boundary_grid());

// Mirror draw for a left-of-cutoff side: GCM over [-horizon, 0], left
// derivative at -1.
double limit_draw_minus(const LimitSpec& spec, std::uint64_t seed,
                        const ProcessGrid& grid = boundary_grid());

// Two-sided discontinuity limit: plus-side draw minus minus-side draw from
// independent sub-streams.
struct SharpLimitSpec {
  LimitSpec plus, minus;
};
double sharp_limit_draw(const SharpLimitSpec& spec, std::uint64_t seed,
                        const ProcessGrid& grid = boundary_grid());

// Fuzzy-design limit. Each side carries a pair (W, B) of standard Brownian
// motions with per-cell increment correlation rho / sqrt(sigma2 p0 (1-p0));
// the draw combines the outcome and treatment GCM slopes by the delta method:
//   xi1 / (p_plus0 - p_minus0) - xi2 * (m_plus0 - m_minus0)/(p_plus0 - p_minus0)^2.
// Exposed for simulation only; no interval construction uses it.
struct FuzzySideSpec {
  double sigma2 = 1.0, density = 1.0;
  double m_slope = 0.0, p_slope = 0.0;
  double p0 = 0.5;   // treatment level at the boundary
  double rho = 0.0;  // cov(y, d) scale at the boundary
};
struct FuzzyLimitSpec {
  FuzzySideSpec plus, minus;
  double m_plus0 = 0, m_minus0 = 0;
  double p_plus0 = 1, p_minus0 = 0;
  double c = 1.0;
};
double fuzzy_limit_draw(const FuzzyLimitSpec& spec, std::uint64_t seed,
                        const ProcessGrid& grid = boundary_grid());

// Kolmogorov-Smirnov distance between n^{1/3} (theta_hat - theta) over MC
// replications of `spec` (pooled offsets, cutoff 0) and the matching
// two-sided boundary_third limit. Requires a = 1/3 (other exponents reserved);
// c > 0; reps >= 2.
struct CltCheck {
  double ks = 0;
  std::vector<double> estimator_draws, limit_draws;
};
CltCheck verify_clt(const mc::DgpSpec& spec, double a, double c, std::size_t n,
                    std::size_t reps, std::uint64_t seed,
                    const ProcessGrid& grid = boundary_grid());

// Mean squared GCM slope at c of W_t + t^2 over a grid of c values; the
// minimizer estimates the reference constant behind kCStar (~0.345).
struct CStarCurve {
  std::vector<double> c, objective;
  double c_star = 0;
};
CStarCurve estimate_cstar(std::size_t reps, std::uint64_t seed,
                          const ProcessGrid& grid = chernoff_grid(),
                          double c_min = 0.05, double c_max = 1.0, double c_step = 0.01);

}  // namespace irdd::limits
