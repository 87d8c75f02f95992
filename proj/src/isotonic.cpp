#include "irdd/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irdd {

namespace {

const std::vector<double> channel_values(const Sample& sorted, Channel ch,
                                         std::vector<double>& scratch) {
  if (ch == Channel::outcome) return sorted.y;
  if (!sorted.has_treatment())
    throw std::invalid_argument("treatment channel requested but sample has no d");
  scratch.assign(sorted.d.begin(), sorted.d.end());
  return scratch;
}

}  // namespace

StepFit pava_fit(const Sample& s, Channel channel) {
  s.validate();
  Sample sorted = s.sorted_by_x();
  std::vector<double> scratch;
  const std::vector<double> ys = channel_values(sorted, channel, scratch);
  const std::size_t n = sorted.size();

  // Merge ties in x into weighted pseudo-observations.
  std::vector<double> ux;       // distinct x
  std::vector<double> gw, gs;   // group weight, group response sum
  std::vector<std::size_t> ghi;  // group end as raw index (exclusive)
  ux.reserve(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    double w = 1, sum = ys[i];
    while (j < n && sorted.x[j] == sorted.x[i]) {
      sum += ys[j];
      w += 1;
      ++j;
    }
    ux.push_back(sorted.x[i]);
    gw.push_back(w);
    gs.push_back(sum);
    ghi.push_back(j);
    i = j;
  }

  // Pool adjacent violators over the pseudo-observations. Each stack entry
  // keeps exact running (weight, sum); only strict decreases in mean pool.
  const std::size_t g = ux.size();
  std::vector<std::size_t> bfirst(g);  // first group of each stacked block
  std::vector<double> bw(g), bs(g);
  std::size_t top = 0;
  for (std::size_t k = 0; k < g; ++k) {
    bfirst[top] = k;
    bw[top] = gw[k];
    bs[top] = gs[k];
    ++top;
    while (top >= 2 && bs[top - 2] * bw[top - 1] > bs[top - 1] * bw[top - 2]) {
      bw[top - 2] += bw[top - 1];
      bs[top - 2] += bs[top - 1];
      --top;
    }
  }

  StepFit fit;
  fit.knots = std::move(ux);
  fit.values.resize(g);
  fit.blocks.reserve(top);
  for (std::size_t b = 0; b < top; ++b) {
    std::size_t glo = bfirst[b];
    std::size_t gend = (b + 1 < top) ? bfirst[b + 1] : g;
    double value = bs[b] / bw[b];
    for (std::size_t k = glo; k < gend; ++k) fit.values[k] = value;
    std::size_t raw_lo = (glo == 0) ? 0 : ghi[glo - 1];
    fit.blocks.push_back(Block{raw_lo, ghi[gend - 1], bw[b], value});
  }
  return fit;
}

double eval_step(const StepFit& fit, double at) {
  if (fit.knots.empty()) throw std::invalid_argument("eval_step: empty fit");
  if (at <= fit.knots.front()) return fit.values.front();
  if (at > fit.knots.back()) return fit.values.back();
  auto it = std::lower_bound(fit.knots.begin(), fit.knots.end(), at);
  return fit.values[static_cast<std::size_t>(it - fit.knots.begin())];
}

// Prefix (suffix) means are taken at tie-group boundaries so the identity
// with the isotonic fit at the extreme x survives duplicated x-values.
double naive_boundary_left(const Sample& s) {
  s.validate();
  Sample sorted = s.sorted_by_x();
  double sum = 0, best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    sum += sorted.y[i];
    if (i + 1 == sorted.size() || sorted.x[i + 1] != sorted.x[i])
      best = std::min(best, sum / static_cast<double>(i + 1));
  }
  return best;
}

double naive_boundary_right(const Sample& s) {
  s.validate();
  Sample sorted = s.sorted_by_x();
  const std::size_t n = sorted.size();
  double sum = 0, best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = n - 1 - i;
    sum += sorted.y[j];
    if (j == 0 || sorted.x[j - 1] != sorted.x[j])
      best = std::max(best, sum / static_cast<double>(i + 1));
  }
  return best;
}

CumSumDiagram cumsum_diagram(const Sample& s, Channel channel) {
  s.validate();
  Sample sorted = s.sorted_by_x();
  std::vector<double> scratch;
  const std::vector<double> ys = channel_values(sorted, channel, scratch);
  const double n = static_cast<double>(sorted.size());

  CumSumDiagram diag;
  diag.u.push_back(0);
  diag.v.push_back(0);
  double count = 0, sum = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted.x[j] == sorted.x[i]) {
      sum += ys[j];
      count += 1;
      ++j;
    }
    diag.u.push_back(count / n);
    diag.v.push_back(sum / n);
    i = j;
  }
  return diag;
}

double gcm_left_derivative(const std::vector<double>& u, const std::vector<double>& v,
                           double at) {
  if (u.size() != v.size() || u.size() < 2)
    throw std::invalid_argument("gcm_left_derivative: need >= 2 points of equal length");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1]))
      throw std::invalid_argument("gcm_left_derivative: u must be strictly increasing");
  if (!(at > u.front() && at <= u.back()))
    throw std::out_of_range("gcm_left_derivative: at outside (u_min, u_max]");

  // Lower convex hull, collinear points merged.
  std::vector<std::size_t> hull;
  hull.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (u[b] - u[a]) * (v[i] - v[a]) - (u[i] - u[a]) * (v[b] - v[a]);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  // Left derivative: slope of the hull segment whose u-interval contains at
  // (segments are half-open on the left, closed on the right).
  std::size_t lo = 0, hi = hull.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (u[hull[mid]] < at)
      lo = mid;
    else
      hi = mid;
  }
  std::size_t a = hull[lo], b = hull[hi];
  return (v[b] - v[a]) / (u[b] - u[a]);
}

double gcm_left_derivative(const CumSumDiagram& diagram, double at) {
  return gcm_left_derivative(diagram.u, diagram.v, at);
}

std::pair<bool, bool> verify_switching(const Sample& s, double level, double x) {
  StepFit fit = pava_fit(s);
  bool lhs = eval_step(fit, x) <= level;

  CumSumDiagram diag = cumsum_diagram(s);
  const std::size_t m = diag.u.size();  // candidates: origin + distinct x
  std::vector<double> val(m);
  double scale = 1;
  for (std::size_t k = 0; k < m; ++k) {
    val[k] = level * diag.u[k] - diag.v[k];
    scale = std::max(scale, std::fabs(val[k]));
  }
  double best = *std::max_element(val.begin(), val.end());
  double tol = 8 * std::numeric_limits<double>::epsilon() * scale;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < m; ++k)
    if (val[k] >= best - tol) arg = k;

  bool rhs;
  if (arg == 0) {
    rhs = false;  // maximizer before the sample: U_n below any finite x
  } else {
    rhs = fit.knots[arg - 1] >= x;
  }
  return {lhs, rhs};
}

}  // namespace irdd
