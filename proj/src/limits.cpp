#include "irdd/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irdd/isotonic.hpp"
#include "irdd/rng.hpp"
#include "irdd/stats.hpp"

namespace irdd::limits {

namespace {

std::size_t step_count(const ProcessGrid& grid) {
  return static_cast<std::size_t>(std::llround(grid.horizon / grid.dt));
}

// Standard Brownian path on [0, horizon]: w[k] = W(k dt), w[0] = 0.
void brownian_path(std::vector<double>& w, std::mt19937_64& rng, double dt) {
  std::normal_distribution<double> z(0.0, 1.0);
  double sd = std::sqrt(dt);
  w[0] = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) w[k] = w[k - 1] + sd * z(rng);
}

// Lower convex hull of (u[k], v[k]); returns indices of hull vertices.
void lower_hull(const std::vector<double>& u, const std::vector<double>& v,
                std::vector<std::size_t>& hull) {
  hull.clear();
  for (std::size_t k = 0; k < u.size(); ++k) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (u[b] - u[a]) * (v[k] - v[a]) - (v[b] - v[a]) * (u[k] - u[a]);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
}

// Slope of the hull segment whose u-interval contains `at` (left derivative).
double hull_slope_at(const std::vector<double>& u, const std::vector<double>& v,
                     const std::vector<std::size_t>& hull, double at) {
  std::size_t lo = 0, hi = hull.size() - 1;  // first hull vertex with u >= at
  while (hi - lo > 0) {
    std::size_t mid = (lo + hi) / 2;
    if (u[hull[mid]] >= at)
      hi = mid;
    else
      lo = mid + 1;
  }
  std::size_t b = hull[hi], a = hull[hi - 1];
  return (v[b] - v[a]) / (u[b] - u[a]);
}

double gcm_slope(const std::vector<double>& u, const std::vector<double>& v, double at) {
  std::vector<std::size_t> hull;
  lower_hull(u, v, hull);
  return hull_slope_at(u, v, hull, at);
}

void require_reaches(const ProcessGrid& grid, double at) {
  if (!(grid.horizon >= std::fabs(at)))
    throw std::invalid_argument("limit draw: grid horizon must cover the evaluation point");
}

}  // namespace

void ProcessGrid::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("grid: dt must be > 0");
  if (!(horizon > 0) || !std::isfinite(horizon))
    throw std::invalid_argument("grid: horizon must be > 0");
  if (horizon / dt > 5e7) throw std::invalid_argument("grid: too many steps");
  if (horizon < dt) throw std::invalid_argument("grid: horizon smaller than one step");
}

void LimitSpec::validate() const {
  if (!(sigma2 > 0) || !std::isfinite(sigma2))
    throw std::invalid_argument("limit spec: sigma2 must be > 0");
  if (!(density > 0) || !std::isfinite(density))
    throw std::invalid_argument("limit spec: density must be > 0");
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("limit spec: c must be > 0");
  if (!std::isfinite(slope)) throw std::invalid_argument("limit spec: slope must be finite");
  if (regime == Regime::interior_chernoff && slope == 0)
    throw std::invalid_argument("limit spec: interior regime needs a nonzero slope");
}

double chernoff_draw(std::uint64_t seed, const ProcessGrid& grid) {
  grid.validate();
  std::size_t steps = step_count(grid);
  double sd = std::sqrt(grid.dt);

  double best = 0.0, arg = 0.0;  // candidate t = 0: W(0) - 0 = 0
  std::mt19937_64 pos = make_engine(seed, 1);
  std::normal_distribution<double> z(0.0, 1.0);
  double w = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    w += sd * z(pos);
    double t = static_cast<double>(k) * grid.dt;
    double val = w - t * t;
    if (val > best) {
      best = val;
      arg = t;
    }
  }
  std::mt19937_64 neg = make_engine(seed, 2);
  w = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    w += sd * z(neg);
    double t = -static_cast<double>(k) * grid.dt;
    double val = w - t * t;
    if (val > best) {
      best = val;
      arg = t;
    }
  }
  return arg;
}

double limit_draw(const LimitSpec& spec, std::uint64_t seed, const ProcessGrid& grid) {
  spec.validate();
  grid.validate();
  if (spec.regime == Regime::interior_chernoff) {
    double scale = std::cbrt(std::fabs(4.0 * spec.slope * spec.sigma2 / spec.density));
    return scale * chernoff_draw(seed, grid);
  }
  require_reaches(grid, 1.0);
  std::size_t steps = step_count(grid);
  std::vector<double> u(steps + 1), v(steps + 1);
  std::mt19937_64 rng = make_engine(seed, 0);
  brownian_path(v, rng, grid.dt);
  double scale = std::sqrt(spec.sigma2 / (spec.c * spec.density));
  double drift = spec.regime == Regime::boundary_third ? spec.c * spec.slope / 2.0 : 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    double t = static_cast<double>(k) * grid.dt;
    u[k] = t;
    v[k] = scale * v[k] + drift * t * t;
  }
  return gcm_slope(u, v, 1.0);
}

double limit_draw_minus(const LimitSpec& spec, std::uint64_t seed, const ProcessGrid& grid) {
  spec.validate();
  grid.validate();
  if (spec.regime == Regime::interior_chernoff) {
    double scale = std::cbrt(std::fabs(4.0 * spec.slope * spec.sigma2 / spec.density));
    return scale * chernoff_draw(seed, grid);
  }
  require_reaches(grid, -1.0);
  std::size_t steps = step_count(grid);
  std::vector<double> u(steps + 1), v(steps + 1), w(steps + 1);
  // anchor W(0) = 0 at the right end and extend leftward
  std::mt19937_64 rng = make_engine(seed, 0);
  std::normal_distribution<double> z(0.0, 1.0);
  double sd = std::sqrt(grid.dt);
  w[steps] = 0.0;
  for (std::size_t k = steps; k-- > 0;) w[k] = w[k + 1] + sd * z(rng);
  double scale = std::sqrt(spec.sigma2 / (spec.c * spec.density));
  double drift = spec.regime == Regime::boundary_third ? spec.c * spec.slope / 2.0 : 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    double t = -grid.horizon + static_cast<double>(k) * grid.dt;
    u[k] = t;
    v[k] = scale * w[k] + drift * t * t;
  }
  return gcm_slope(u, v, -1.0);
}

double sharp_limit_draw(const SharpLimitSpec& spec, std::uint64_t seed, const ProcessGrid& grid) {
  double plus = limit_draw(spec.plus, derive_seed(seed, 1), grid);
  double minus = limit_draw_minus(spec.minus, derive_seed(seed, 2), grid);
  return plus - minus;
}

double fuzzy_limit_draw(const FuzzyLimitSpec& spec, std::uint64_t seed, const ProcessGrid& grid) {
  grid.validate();
  require_reaches(grid, 1.0);
  if (!(spec.c > 0)) throw std::invalid_argument("fuzzy limit: c must be > 0");
  double dp = spec.p_plus0 - spec.p_minus0;
  if (std::fabs(dp) < 1e-12)
    throw weak_discontinuity_error("fuzzy limit: treatment jump is zero", spec.p_minus0,
                                   spec.p_plus0);
  double dm = spec.m_plus0 - spec.m_minus0;

  std::size_t steps = step_count(grid);
  std::vector<double> u(steps + 1), gm(steps + 1), gp(steps + 1);
  auto side_draw = [&](const FuzzySideSpec& side, std::uint64_t sub, bool plus_side, double& xi_m,
                       double& xi_p) {
    if (!(side.sigma2 > 0) || !(side.density > 0) || !(side.p0 > 0) || !(side.p0 < 1))
      throw std::invalid_argument("fuzzy limit: side needs sigma2, density > 0 and p0 in (0,1)");
    double r = side.rho / std::sqrt(side.sigma2 * side.p0 * (1.0 - side.p0));
    if (!(std::fabs(r) <= 1.0))
      throw std::invalid_argument("fuzzy limit: rho exceeds the correlation bound");
    double sm = std::sqrt(side.sigma2 / (spec.c * side.density));
    double sp = std::sqrt(side.p0 * (1.0 - side.p0) / (spec.c * side.density));
    std::mt19937_64 rng = make_engine(seed, sub);
    std::normal_distribution<double> z(0.0, 1.0);
    double sd = std::sqrt(grid.dt), wm = 0.0, wp = 0.0;
    if (plus_side) {
      for (std::size_t k = 0; k <= steps; ++k) {
        double t = static_cast<double>(k) * grid.dt;
        u[k] = t;
        gm[k] = sm * wm + spec.c * side.m_slope / 2.0 * t * t;
        gp[k] = sp * wp + spec.c * side.p_slope / 2.0 * t * t;
        double z1 = z(rng), z2 = z(rng);
        wm += sd * z1;
        wp += sd * (r * z1 + std::sqrt(1.0 - r * r) * z2);
      }
      xi_m = gcm_slope(u, gm, 1.0);
      xi_p = gcm_slope(u, gp, 1.0);
    } else {
      // walk leftward from the anchor at 0, then assemble in grid order
      std::vector<double> vm(steps + 1), vp(steps + 1);
      vm[steps] = 0.0;
      vp[steps] = 0.0;
      for (std::size_t k = steps; k-- > 0;) {
        double z1 = z(rng), z2 = z(rng);
        vm[k] = vm[k + 1] + sd * z1;
        vp[k] = vp[k + 1] + sd * (r * z1 + std::sqrt(1.0 - r * r) * z2);
      }
      for (std::size_t k = 0; k <= steps; ++k) {
        double t = -grid.horizon + static_cast<double>(k) * grid.dt;
        u[k] = t;
        gm[k] = sm * vm[k] + spec.c * side.m_slope / 2.0 * t * t;
        gp[k] = sp * vp[k] + spec.c * side.p_slope / 2.0 * t * t;
      }
      xi_m = gcm_slope(u, gm, -1.0);
      xi_p = gcm_slope(u, gp, -1.0);
    }
  };

  double mp = 0, pp = 0, mm = 0, pm = 0;
  side_draw(spec.plus, 1, true, mp, pp);
  side_draw(spec.minus, 2, false, mm, pm);
  double xi1 = mp - mm, xi2 = pp - pm;
  return xi1 / dp - xi2 * dm / (dp * dp);
}

CltCheck verify_clt(const mc::DgpSpec& spec, double a, double c, std::size_t n, std::size_t reps,
                    std::uint64_t seed, const ProcessGrid& grid) {
  if (std::fabs(a - 1.0 / 3.0) > 1e-12)
    throw std::invalid_argument("verify_clt: only a = 1/3 is supported");
  if (!(c > 0)) throw std::invalid_argument("verify_clt: c must be > 0");
  if (reps < 2) throw std::invalid_argument("verify_clt: reps must be >= 2");
  if (n < 4) throw std::invalid_argument("verify_clt: n must be >= 4");

  RddConfig cfg;
  cfg.cutoff = 0.0;
  cfg.c = c;
  cfg.a = a;
  cfg.offsets = OffsetConvention::pooled;

  CltCheck out;
  out.estimator_draws.reserve(reps);
  double rate = std::cbrt(static_cast<double>(n));
  std::uint64_t data_master = derive_seed(seed, 1);
  std::uint64_t limit_master = derive_seed(seed, 2);
  for (std::size_t r = 0; r < reps; ++r) {
    std::mt19937_64 rng = make_engine(data_master, r);
    Sample s = mc::dgp_sample(spec, n, rng);
    try {
      RddEstimate est = sharp_estimate(s, cfg);
      out.estimator_draws.push_back(rate * (est.theta - spec.theta));
    } catch (const insufficient_data_error&) {
      // a replication with an empty side contributes nothing
    }
  }
  if (out.estimator_draws.size() < 2)
    throw std::runtime_error("verify_clt: too few usable replications");

  SharpLimitSpec lim;
  lim.plus = {Regime::boundary_third, spec.sigma2_0, spec.f0, spec.slope_plus, c};
  lim.minus = {Regime::boundary_third, spec.sigma2_0, spec.f0, spec.slope_minus, c};
  out.limit_draws.resize(reps);
  for (std::size_t r = 0; r < reps; ++r)
    out.limit_draws[r] = sharp_limit_draw(lim, derive_seed(limit_master, r), grid);

  out.ks = ks_distance(out.estimator_draws, out.limit_draws);
  return out;
}

CStarCurve estimate_cstar(std::size_t reps, std::uint64_t seed, const ProcessGrid& grid,
                          double c_min, double c_max, double c_step) {
  grid.validate();
  if (reps < 1) throw std::invalid_argument("estimate_cstar: reps must be >= 1");
  if (!(c_min > 0 && c_max > c_min && c_step > 0))
    throw std::invalid_argument("estimate_cstar: need 0 < c_min < c_max and c_step > 0");
  if (!(grid.horizon >= c_max))
    throw std::invalid_argument("estimate_cstar: horizon must cover c_max");

  CStarCurve curve;
  for (double c = c_min; c <= c_max + 1e-12; c += c_step) curve.c.push_back(c);
  curve.objective.assign(curve.c.size(), 0.0);

  std::size_t steps = step_count(grid);
  std::vector<double> u(steps + 1), v(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) u[k] = static_cast<double>(k) * grid.dt;
  std::vector<std::size_t> hull;
  std::normal_distribution<double> z(0.0, 1.0);
  double sd = std::sqrt(grid.dt);
  for (std::size_t r = 0; r < reps; ++r) {
    std::mt19937_64 rng = make_engine(seed, r);
    double w = 0.0;
    v[0] = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
      w += sd * z(rng);
      v[k] = w + u[k] * u[k];
    }
    lower_hull(u, v, hull);
    // one forward sweep over the ascending c grid reuses the hull
    std::size_t seg = 1;
    for (std::size_t j = 0; j < curve.c.size(); ++j) {
      while (seg + 1 < hull.size() && u[hull[seg]] < curve.c[j]) ++seg;
      std::size_t b = hull[seg], a = hull[seg - 1];
      double slope = (v[b] - v[a]) / (u[b] - u[a]);
      curve.objective[j] += slope * slope;
    }
  }
  std::size_t best = 0;
  for (std::size_t j = 0; j < curve.c.size(); ++j) {
    curve.objective[j] /= static_cast<double>(reps);
    if (curve.objective[j] < curve.objective[best]) best = j;
  }
  curve.c_star = curve.c[best];
  return curve;
}

}  // namespace irdd::limits
