#include "irdd/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irdd/rng.hpp"
#include "irdd/stats.hpp"

namespace irdd::boot {

namespace {

void draw_multipliers_into(Multiplier kind, std::vector<double>& out, std::mt19937_64& rng) {
  switch (kind) {
    case Multiplier::rademacher: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& v : out) v = u(rng) < 0.5 ? -1.0 : 1.0;
      break;
    }
    case Multiplier::gaussian: {
      std::normal_distribution<double> z(0.0, 1.0);
      for (double& v : out) v = z(rng);
      break;
    }
    case Multiplier::mammen: {
      const double s5 = std::sqrt(5.0);
      const double lo = -(s5 - 1.0) / 2.0, hi = (s5 + 1.0) / 2.0;
      const double p_lo = (s5 + 1.0) / (2.0 * s5);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& v : out) v = u(rng) < p_lo ? lo : hi;
      break;
    }
  }
}

// One side of the cutoff, x sorted ascending in cutoff-shifted coordinates.
// Refits the non-decreasing least-squares step function for fresh outcomes
// without reallocating; `sign` folds in a non-increasing side (fit -y, negate).
class SideRefitter {
 public:
  SideRefitter(const double* xs, std::size_t n, double sign) : sign_(sign) {
    gstart_.push_back(0);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && xs[j] == xs[i]) ++j;
      ux_.push_back(xs[i]);
      gw_.push_back(static_cast<double>(j - i));
      gstart_.push_back(j);
      i = j;
    }
    std::size_t g = ux_.size();
    gsum_.resize(g);
    bfirst_.resize(g);
    bw_.resize(g);
    bs_.resize(g);
  }

  // Fitted value at `at` under the eval_step conventions (clamping included).
  double refit_eval(const double* ys, double at) {
    pool(ys);
    std::size_t g = ux_.size();
    std::size_t k;  // group index the evaluation point resolves to
    if (at <= ux_.front())
      k = 0;
    else if (at > ux_.back())
      k = g - 1;
    else
      k = static_cast<std::size_t>(std::lower_bound(ux_.begin(), ux_.end(), at) - ux_.begin());
    std::size_t b = block_of(k);
    return sign_ * (bs_[b] / bw_[b]);
  }

  double refit_first_block(const double* ys) {
    pool(ys);
    return sign_ * (bs_[0] / bw_[0]);
  }

  double refit_last_block(const double* ys) {
    pool(ys);
    return sign_ * (bs_[top_ - 1] / bw_[top_ - 1]);
  }

 private:
  void pool(const double* ys) {
    std::size_t g = ux_.size();
    for (std::size_t k = 0; k < g; ++k) {
      double sum = 0;
      for (std::size_t i = gstart_[k]; i < gstart_[k + 1]; ++i) sum += ys[i];
      gsum_[k] = sign_ * sum;
    }
    top_ = 0;
    for (std::size_t k = 0; k < g; ++k) {
      bfirst_[top_] = k;
      bw_[top_] = gw_[k];
      bs_[top_] = gsum_[k];
      ++top_;
      while (top_ >= 2 && bs_[top_ - 2] * bw_[top_ - 1] > bs_[top_ - 1] * bw_[top_ - 2]) {
        bw_[top_ - 2] += bw_[top_ - 1];
        bs_[top_ - 2] += bs_[top_ - 1];
        --top_;
      }
    }
  }

  std::size_t block_of(std::size_t group) const {
    std::size_t lo = 0, hi = top_;  // last block with bfirst <= group
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (bfirst_[mid] <= group)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  double sign_;
  std::vector<double> ux_, gw_, gsum_, bw_, bs_;
  std::vector<std::size_t> gstart_, bfirst_;
  std::size_t top_ = 0;
};

struct IntervalOut {
  double lower, upper;
};

IntervalOut interval_from(const std::vector<double>& replicates, double point, double level,
                          CiFlavor flavor) {
  double alpha = 1.0 - level;
  double qlo = quantile(replicates, alpha / 2.0);
  double qhi = quantile(replicates, 1.0 - alpha / 2.0);
  if (flavor == CiFlavor::recenter) return {point - qhi, point - qlo};
  return {point + qlo, point + qhi};
}

BootstrapReport report_shell(const BootstrapConfig& cfg, double point) {
  BootstrapReport rep;
  rep.point = point;
  rep.level = cfg.level;
  rep.reps = cfg.reps;
  rep.low_reps_warning = cfg.reps < 100;
  rep.c = cfg.c;
  rep.a = cfg.a;
  rep.multiplier = cfg.multiplier;
  rep.flavor = cfg.flavor;
  rep.seed = cfg.seed;
  return rep;
}

}  // namespace

void BootstrapConfig::validate() const {
  if (!std::isfinite(cutoff)) throw std::invalid_argument("bootstrap config: cutoff not finite");
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("bootstrap config: c must be > 0");
  if (!(a > 1.0 / 3.0 && a < 1.0))
    throw std::invalid_argument("bootstrap config: a must lie in (1/3, 1)");
  if (reps < 1) throw std::invalid_argument("bootstrap config: reps must be >= 1");
  if (!(level > 0 && level < 1))
    throw std::invalid_argument("bootstrap config: level must lie in (0,1)");
}

std::vector<double> draw_multipliers(Multiplier kind, std::size_t n, std::mt19937_64& rng) {
  std::vector<double> out(n);
  draw_multipliers_into(kind, out, rng);
  return out;
}

BootstrapReport sharp_wild_ci(const Sample& s, const BootstrapConfig& cfg) {
  cfg.validate();
  s.validate();
  Sample sorted = s.sorted_by_x();
  const std::size_t n = sorted.size();

  RddConfig rcfg;
  rcfg.cutoff = cfg.cutoff;
  rcfg.c = cfg.c;
  rcfg.a = 0.5;  // sharp inference trims and evaluates at c * n^{-1/2}
  rcfg.offsets = cfg.offsets;
  rcfg.increasing_left = cfg.increasing_left;
  rcfg.increasing_right = cfg.increasing_right;
  TrimmedFit tf = trimmed_fit(sorted, rcfg);
  const double theta = tf.frozen_plus - tf.frozen_minus;

  std::vector<double> center(n), resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    center[i] = tf(sorted.x[i]);
    resid[i] = sorted.y[i] - center[i];
  }

  const std::size_t k = static_cast<std::size_t>(
      std::lower_bound(sorted.x.begin(), sorted.x.end(), cfg.cutoff) - sorted.x.begin());
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = sorted.x[i] - cfg.cutoff;
  SideRefitter left(xs.data(), k, cfg.increasing_left ? 1.0 : -1.0);
  SideRefitter right(xs.data() + k, n - k, cfg.increasing_right ? 1.0 : -1.0);

  BootstrapReport rep = report_shell(cfg, theta);
  rep.replicates.resize(cfg.reps);
  std::vector<double> eta(n), ystar(n);
  for (std::size_t b = 0; b < cfg.reps; ++b) {
    std::mt19937_64 rng = make_engine(cfg.seed, b);
    draw_multipliers_into(cfg.multiplier, eta, rng);
    for (std::size_t i = 0; i < n; ++i) ystar[i] = center[i] + eta[i] * resid[i];
    double m_minus = left.refit_eval(ystar.data(), -tf.eps_minus);
    double m_plus = right.refit_eval(ystar.data() + k, tf.eps_plus);
    rep.replicates[b] = (m_plus - m_minus) - theta;
  }
  auto [lo, hi] = interval_from(rep.replicates, theta, cfg.level, cfg.flavor);
  rep.lower = lo;
  rep.upper = hi;
  return rep;
}

BootstrapReport boundary_wild_ci(const Sample& side, const BootstrapConfig& cfg) {
  cfg.validate();
  side.validate();
  Sample sorted = side.sorted_by_x();
  const std::size_t n = sorted.size();
  if (sorted.x.front() < 0)
    throw std::invalid_argument("boundary_wild_ci: side support must start at x >= 0");

  const double delta = cfg.c * std::pow(static_cast<double>(n), -cfg.a);
  StepFit fit = pava_fit(sorted);
  const double point = eval_step(fit, delta);

  std::vector<double> center(n), resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    center[i] = sorted.x[i] <= delta ? point : eval_step(fit, sorted.x[i]);
    resid[i] = sorted.y[i] - center[i];
  }

  SideRefitter refit(sorted.x.data(), n, 1.0);
  BootstrapReport rep = report_shell(cfg, point);
  rep.replicates.resize(cfg.reps);
  std::vector<double> eta(n), ystar(n);
  for (std::size_t b = 0; b < cfg.reps; ++b) {
    std::mt19937_64 rng = make_engine(cfg.seed, b);
    draw_multipliers_into(cfg.multiplier, eta, rng);
    for (std::size_t i = 0; i < n; ++i) ystar[i] = center[i] + eta[i] * resid[i];
    rep.replicates[b] = refit.refit_eval(ystar.data(), delta) - point;
  }
  auto [lo, hi] = interval_from(rep.replicates, point, cfg.level, cfg.flavor);
  rep.lower = lo;
  rep.upper = hi;
  return rep;
}

BootstrapReport naive_wild_ci(const Sample& s, const BootstrapConfig& cfg) {
  cfg.validate();
  s.validate();
  Sample sorted = s.sorted_by_x();
  const std::size_t n = sorted.size();
  const std::size_t k = static_cast<std::size_t>(
      std::lower_bound(sorted.x.begin(), sorted.x.end(), cfg.cutoff) - sorted.x.begin());
  if (k == 0 || k == n)
    throw insufficient_data_error("cutoff side without data (left " + std::to_string(k) +
                                      ", right " + std::to_string(n - k) + ")",
                                  k, n - k);

  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = sorted.x[i] - cfg.cutoff;
  SideRefitter left(xs.data(), k, cfg.increasing_left ? 1.0 : -1.0);
  SideRefitter right(xs.data() + k, n - k, cfg.increasing_right ? 1.0 : -1.0);

  // Untrimmed centers and the extreme-order-statistic estimate.
  std::vector<double> center(n), resid(n);
  const double m_minus = left.refit_last_block(sorted.y.data());
  const double m_plus = right.refit_first_block(sorted.y.data() + k);
  const double theta = m_plus - m_minus;
  {
    // per-row fitted values from the two untrimmed side fits
    RddConfig rcfg;
    rcfg.cutoff = cfg.cutoff;
    rcfg.increasing_left = cfg.increasing_left;
    rcfg.increasing_right = cfg.increasing_right;
    Sample ls, rs;
    ls.x.assign(xs.begin(), xs.begin() + k);
    ls.y.assign(sorted.y.begin(), sorted.y.begin() + k);
    rs.x.assign(xs.begin() + k, xs.end());
    rs.y.assign(sorted.y.begin() + k, sorted.y.end());
    StepFit lf = pava_fit(ls), rf = pava_fit(rs);
    for (std::size_t i = 0; i < k; ++i) center[i] = eval_step(lf, xs[i]);
    for (std::size_t i = k; i < n; ++i) center[i] = eval_step(rf, xs[i]);
    for (std::size_t i = 0; i < n; ++i) resid[i] = sorted.y[i] - center[i];
  }

  BootstrapReport rep = report_shell(cfg, theta);
  rep.replicates.resize(cfg.reps);
  std::vector<double> eta(n), ystar(n);
  for (std::size_t b = 0; b < cfg.reps; ++b) {
    std::mt19937_64 rng = make_engine(cfg.seed, b);
    draw_multipliers_into(cfg.multiplier, eta, rng);
    for (std::size_t i = 0; i < n; ++i) ystar[i] = center[i] + eta[i] * resid[i];
    double bm = left.refit_last_block(ystar.data());
    double bp = right.refit_first_block(ystar.data() + k);
    rep.replicates[b] = (bp - bm) - theta;
  }
  auto [lo, hi] = interval_from(rep.replicates, theta, cfg.level, cfg.flavor);
  rep.lower = lo;
  rep.upper = hi;
  return rep;
}

}  // namespace irdd::boot
