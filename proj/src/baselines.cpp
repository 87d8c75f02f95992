#include "irdd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irdd/stats.hpp"

namespace irdd::baselines {

std::size_t default_k(std::size_t n) {
  if (n == 0) return 0;
  std::size_t k = 1;
  while ((k + 1) * (k + 1) * (k + 1) <= n) ++k;
  return k;
}

double knn_boundary(const Sample& side, double boundary, std::size_t k) {
  side.validate();
  const std::size_t n = side.size();
  if (k < 1 || k > n) throw std::invalid_argument("knn_boundary: k must lie in [1, n]");
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = std::fabs(side.x[i] - boundary);
  std::vector<double> order = dist;
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
  const double radius = order[k - 1];
  double sum = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] <= radius) {
      sum += side.y[i];
      ++used;
    }
  }
  return sum / static_cast<double>(used);
}

double rule_of_thumb_bandwidth(const Sample& side) {
  side.validate();
  const std::size_t n = side.size();
  double m = mean(side.x);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (side.x[i] - m) * (side.x[i] - m);
  double sd = std::sqrt(pairwise_sum(sq) / static_cast<double>(n - (n > 1 ? 1 : 0)));
  if (!(sd > 0)) throw degenerate_window_error("rule-of-thumb bandwidth: x has no spread");
  return 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
}

double local_linear_boundary(const Sample& side, double boundary, const LocalLinearConfig& cfg) {
  side.validate();
  double h = cfg.bandwidth > 0 ? cfg.bandwidth : rule_of_thumb_bandwidth(side);
  // weighted normal equations for y ~ 1 + (x - boundary)
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  double first_x = 0;
  bool have_first = false, two_distinct = false;
  for (std::size_t i = 0; i < side.size(); ++i) {
    double u = side.x[i] - boundary;
    double w = 1.0 - std::fabs(u) / h;
    if (w <= 0) continue;
    if (!have_first) {
      first_x = side.x[i];
      have_first = true;
    } else if (side.x[i] != first_x) {
      two_distinct = true;
    }
    s0 += w;
    s1 += w * u;
    s2 += w * u * u;
    t0 += w * side.y[i];
    t1 += w * u * side.y[i];
  }
  if (!two_distinct)
    throw degenerate_window_error(
        "local linear fit: need two distinct x with positive weight inside h = " +
        std::to_string(h));
  double det = s0 * s2 - s1 * s1;
  if (!(det > 0))
    throw degenerate_window_error("local linear fit: singular weighted design");
  return (s2 * t0 - s1 * t1) / det;
}

RddEstimate sharp_baseline_estimate(const Sample& s, double cutoff, const BaselineConfig& cfg) {
  s.validate();
  Sample sorted = s.sorted_by_x();
  const std::size_t n = sorted.size();
  const std::size_t split = static_cast<std::size_t>(
      std::lower_bound(sorted.x.begin(), sorted.x.end(), cutoff) - sorted.x.begin());
  if (split == 0 || split == n)
    throw insufficient_data_error("baseline estimate: cutoff side without data (left " +
                                      std::to_string(split) + ", right " +
                                      std::to_string(n - split) + ")",
                                  split, n - split);
  Sample left, right;
  left.x.assign(sorted.x.begin(), sorted.x.begin() + split);
  left.y.assign(sorted.y.begin(), sorted.y.begin() + split);
  right.x.assign(sorted.x.begin() + split, sorted.x.end());
  right.y.assign(sorted.y.begin() + split, sorted.y.end());

  RddEstimate est;
  est.n_minus = split;
  est.n_plus = n - split;
  est.eval_minus = cutoff;
  est.eval_plus = cutoff;
  if (cfg.method == BaselineMethod::knn) {
    std::size_t k = cfg.k > 0 ? cfg.k : default_k(n);
    est.m_minus = knn_boundary(left, cutoff, std::min(k, left.size()));
    est.m_plus = knn_boundary(right, cutoff, std::min(k, right.size()));
  } else {
    LocalLinearConfig ll{cfg.bandwidth};
    est.m_minus = local_linear_boundary(left, cutoff, ll);
    est.m_plus = local_linear_boundary(right, cutoff, ll);
  }
  est.theta = est.m_plus - est.m_minus;
  return est;
}

}  // namespace irdd::baselines
