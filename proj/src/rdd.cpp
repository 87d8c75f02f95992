#include "irdd/rdd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irdd {

namespace {

// Split a validated, x-sorted sample at the cutoff; x >= cutoff goes right.
// Both halves are shifted so the cutoff sits at 0.
struct Split {
  Sample left, right;
};

Split split_at(const Sample& sorted, double cutoff) {
  Split out;
  auto it = std::lower_bound(sorted.x.begin(), sorted.x.end(), cutoff);
  std::size_t k = static_cast<std::size_t>(it - sorted.x.begin());
  out.left.x.assign(sorted.x.begin(), sorted.x.begin() + k);
  out.left.y.assign(sorted.y.begin(), sorted.y.begin() + k);
  out.right.x.assign(sorted.x.begin() + k, sorted.x.end());
  out.right.y.assign(sorted.y.begin() + k, sorted.y.end());
  if (sorted.has_treatment()) {
    out.left.d.assign(sorted.d.begin(), sorted.d.begin() + k);
    out.right.d.assign(sorted.d.begin() + k, sorted.d.end());
  }
  for (double& v : out.left.x) v -= cutoff;
  for (double& v : out.right.x) v -= cutoff;
  return out;
}

Sample negated(const Sample& s, Channel ch) {
  Sample out = s;
  if (ch == Channel::outcome) {
    for (double& v : out.y) v = -v;
  } else {
    out.y.assign(s.d.begin(), s.d.end());
    for (double& v : out.y) v = -v;
    out.d.clear();
  }
  return out;
}

Sample channel_view(const Sample& s, Channel ch) {
  if (ch == Channel::outcome) return s;
  Sample out;
  out.x = s.x;
  out.y.assign(s.d.begin(), s.d.end());
  return out;
}

// Fit value at +offset for a non-decreasing (or, with increasing=false,
// non-increasing) regression on a side supported right of 0.
double side_value_left(const Sample& side, double offset, bool increasing, Channel ch) {
  if (increasing) return eval_step(pava_fit(channel_view(side, ch)), offset);
  return -eval_step(pava_fit(negated(side, ch)), offset);
}

double side_value_right(const Sample& side, double offset, bool increasing, Channel ch) {
  if (increasing) return eval_step(pava_fit(channel_view(side, ch)), -offset);
  return -eval_step(pava_fit(negated(side, ch)), -offset);
}

double naive_left(const Sample& side, bool increasing, Channel ch) {
  if (increasing) return naive_boundary_left(channel_view(side, ch));
  return -naive_boundary_left(negated(side, ch));
}

double naive_right(const Sample& side, bool increasing, Channel ch) {
  if (increasing) return naive_boundary_right(channel_view(side, ch));
  return -naive_boundary_right(negated(side, ch));
}

double offset_for(const RddConfig& cfg, std::size_t n_side, std::size_t n_total) {
  double n = static_cast<double>(cfg.offsets == OffsetConvention::per_side ? n_side : n_total);
  return cfg.c * std::pow(n, -cfg.a);
}

struct CorePieces {
  Split sides;
  double delta_minus = 0, delta_plus = 0;
};

CorePieces core_pieces(const Sample& s, const RddConfig& cfg) {
  cfg.validate();
  s.validate();
  CorePieces out;
  out.sides = split_at(s.sorted_by_x(), cfg.cutoff);
  std::size_t nl = out.sides.left.size(), nr = out.sides.right.size();
  if (nl == 0 || nr == 0)
    throw insufficient_data_error("cutoff side without data (left " + std::to_string(nl) +
                                      ", right " + std::to_string(nr) + ")",
                                  nl, nr);
  out.delta_minus = offset_for(cfg, nl, nl + nr);
  out.delta_plus = offset_for(cfg, nr, nl + nr);
  return out;
}

RddEstimate estimate_channel(const CorePieces& p, const RddConfig& cfg, Channel ch) {
  const Sample& L = p.sides.left;
  const Sample& R = p.sides.right;
  RddEstimate est;
  est.n_minus = L.size();
  est.n_plus = R.size();
  est.eval_minus = cfg.cutoff - p.delta_minus;
  est.eval_plus = cfg.cutoff + p.delta_plus;
  est.clamped_minus = -p.delta_minus < L.x.front();
  est.clamped_plus = p.delta_plus > R.x.back();
  est.m_minus = side_value_right(L, p.delta_minus, cfg.increasing_left, ch);
  est.m_plus = side_value_left(R, p.delta_plus, cfg.increasing_right, ch);
  est.theta = est.m_plus - est.m_minus;
  est.naive_theta = naive_left(R, cfg.increasing_right, ch) - naive_right(L, cfg.increasing_left, ch);
  return est;
}

}  // namespace

void RddConfig::validate() const {
  if (!std::isfinite(cutoff)) throw std::invalid_argument("rdd config: cutoff not finite");
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("rdd config: c must be > 0");
  if (!(a > 0 && a < 1)) throw std::invalid_argument("rdd config: a must lie in (0,1)");
}

double boundary_value_left(const Sample& side, double offset) {
  return eval_step(pava_fit(side), offset);
}

double boundary_value_right(const Sample& side, double offset) {
  return eval_step(pava_fit(side), -offset);
}

double boundary_corrected_left(const Sample& side, double c, double a) {
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("boundary: c must be > 0");
  if (!(a > 0 && a < 1)) throw std::invalid_argument("boundary: a must lie in (0,1)");
  side.validate();
  return boundary_value_left(side, c * std::pow(static_cast<double>(side.size()), -a));
}

double boundary_corrected_right(const Sample& side, double c, double a) {
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("boundary: c must be > 0");
  if (!(a > 0 && a < 1)) throw std::invalid_argument("boundary: a must lie in (0,1)");
  side.validate();
  return boundary_value_right(side, c * std::pow(static_cast<double>(side.size()), -a));
}

RddEstimate sharp_estimate(const Sample& s, const RddConfig& cfg) {
  return estimate_channel(core_pieces(s, cfg), cfg, Channel::outcome);
}

RddEstimate fuzzy_estimate(const Sample& s, const RddConfig& cfg) {
  if (!s.has_treatment())
    throw std::invalid_argument("fuzzy estimate requires a treatment channel");
  CorePieces p = core_pieces(s, cfg);
  RddEstimate num = estimate_channel(p, cfg, Channel::outcome);
  RddEstimate den = estimate_channel(p, cfg, Channel::treatment);

  constexpr double kTol = 1e-8;
  double gap = den.m_plus - den.m_minus;
  if (std::fabs(gap) < kTol)
    throw weak_discontinuity_error(
        "treatment probability jump below tolerance (p- = " + std::to_string(den.m_minus) +
            ", p+ = " + std::to_string(den.m_plus) + ")",
        den.m_minus, den.m_plus);

  RddEstimate est = num;
  est.p_minus = den.m_minus;
  est.p_plus = den.m_plus;
  est.theta = (num.m_plus - num.m_minus) / gap;
  est.clamped_minus = num.clamped_minus || den.clamped_minus;
  est.clamped_plus = num.clamped_plus || den.clamped_plus;
  if (num.naive_theta && den.naive_theta && std::fabs(*den.naive_theta) >= kTol)
    est.naive_theta = *num.naive_theta / *den.naive_theta;
  else
    est.naive_theta.reset();
  return est;
}

double TrimmedFit::operator()(double x) const {
  double u = x - cutoff;
  if (u < -eps_minus) return eval_step(left, u);
  if (u < 0) return frozen_minus;
  if (u <= eps_plus) return frozen_plus;
  return eval_step(right, u);
}

TrimmedFit trimmed_fit(const Sample& s, const RddConfig& cfg) {
  RddConfig half = cfg;
  half.a = 0.5;
  CorePieces p = core_pieces(s, half);

  TrimmedFit out;
  out.cutoff = cfg.cutoff;
  out.eps_minus = p.delta_minus;
  out.eps_plus = p.delta_plus;
  out.increasing_left = cfg.increasing_left;
  out.increasing_right = cfg.increasing_right;

  // Direction flags fold into the stored fits so evaluation stays one
  // eval_step call: a non-increasing side stores the negated-fit values.
  auto side_fit = [](const Sample& side, bool increasing) {
    if (increasing) return pava_fit(side);
    StepFit f = pava_fit(negated(side, Channel::outcome));
    for (double& v : f.values) v = -v;
    for (Block& b : f.blocks) b.value = -b.value;
    return f;
  };
  out.left = side_fit(p.sides.left, cfg.increasing_left);
  out.right = side_fit(p.sides.right, cfg.increasing_right);
  out.frozen_minus = eval_step(out.left, -out.eps_minus);
  out.frozen_plus = eval_step(out.right, out.eps_plus);
  return out;
}

std::vector<double> trimmed_residuals(const TrimmedFit& fit, const Sample& s) {
  s.validate();
  std::vector<double> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = s.y[i] - fit(s.x[i]);
  return r;
}

namespace {

double optimal_offset(std::size_t n, double slope, double sigma2, double density) {
  if (!(slope > 0) || !(sigma2 > 0) || !(density > 0))
    throw std::invalid_argument("optimal_c_eval: slope, sigma2, density must be > 0");
  double big_a = std::pow(2.0 / slope * std::sqrt(sigma2 / density), 2.0 / 3.0);
  return kCStar * big_a * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

}  // namespace

double optimal_c_eval_left(const Sample& side, double slope, double sigma2, double density) {
  side.validate();
  return boundary_value_left(side, optimal_offset(side.size(), slope, sigma2, density));
}

double optimal_c_eval_right(const Sample& side, double slope, double sigma2, double density) {
  side.validate();
  return boundary_value_right(side, optimal_offset(side.size(), slope, sigma2, density));
}

}  // namespace irdd
