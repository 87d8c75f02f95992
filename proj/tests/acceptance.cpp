// Acceptance harness. Prints one PASS/FAIL/SKIP line per criterion (with
// per-cell detail for the table reproductions) and exits nonzero if any
// non-skipped criterion fails.
//
// argv[1]: project source directory, used to locate the optional election
// dataset at data/lee1946_1998.csv (criterion 9 is skipped without it).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "irdd/baselines.hpp"
#include "irdd/bootstrap.hpp"
#include "irdd/io.hpp"
#include "irdd/isotonic.hpp"
#include "irdd/limits.hpp"
#include "irdd/mc.hpp"
#include "irdd/rdd.hpp"
#include "irdd/rng.hpp"
#include "irdd/stats.hpp"

using namespace irdd;

namespace {

double now_seconds() {
  static const auto start = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Timer {
  double begin = now_seconds();
  double elapsed() const { return now_seconds() - begin; }
};

// ---------------------------------------------------------------- criterion 1

// Independent brute-force oracle: merge ties into weighted groups, then
// m_g = max_{s<=g} min_{t>=g} of the weighted mean over groups s..t.
std::vector<double> oracle_values(const Sample& sorted) {
  std::vector<double> gy, gw;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0;
    while (j < sorted.size() && sorted.x[j] == sorted.x[i]) sum += sorted.y[j], ++j;
    gy.push_back(sum / static_cast<double>(j - i));
    gw.push_back(static_cast<double>(j - i));
    i = j;
  }
  std::size_t g = gy.size();
  std::vector<double> out(g);
  for (std::size_t i = 0; i < g; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a <= i; ++a) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t b = i; b < g; ++b) {
        double sw = 0, sy = 0;
        for (std::size_t k = a; k <= b; ++k) sw += gw[k], sy += gw[k] * gy[k];
        worst = std::min(worst, sy / sw);
      }
      best = std::max(best, worst);
    }
    out[i] = best;
  }
  return out;
}

Sample random_sample(std::mt19937_64& rng, std::size_t max_n, bool with_ties) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n);
  std::normal_distribution<double> yd(0.0, 1.0);
  std::uniform_real_distribution<double> xd(-1.0, 1.0);
  std::uniform_int_distribution<int> tie(0, 4);
  Sample s;
  std::size_t n = nd(rng);
  for (std::size_t i = 0; i < n; ++i) {
    s.x.push_back(with_ties ? static_cast<double>(tie(rng)) / 4.0 : xd(rng));
    s.y.push_back(yd(rng));
  }
  return s.sorted_by_x();
}

bool criterion_oracle(std::string& detail) {
  Timer t;
  std::mt19937_64 rng = make_engine(11, 0);
  std::size_t bad = 0;
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    Sample s = random_sample(rng, 12, rep % 3 == 0);
    StepFit fit = pava_fit(s);
    std::vector<double> oracle = oracle_values(s);
    if (fit.values.size() != oracle.size()) {
      ++bad;
      continue;
    }
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      double err = std::fabs(fit.values[i] - oracle[i]);
      worst = std::max(worst, err);
      if (err > 1e-10) ++bad;
    }
    CumSumDiagram diagram = cumsum_diagram(s);
    double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      double gcm = gcm_left_derivative(diagram, static_cast<double>(i + 1) / n);
      double err = std::fabs(eval_step(fit, s.x[i]) - gcm);
      worst = std::max(worst, err);
      if (err > 1e-10) ++bad;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "1000 samples, max |fit - oracle| = %.2e, %zu violations, %.1fs", worst,
                bad, t.elapsed());
  detail = buf;
  return bad == 0 && t.elapsed() < 10.0;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_switching(std::string& detail) {
  Timer t;
  std::mt19937_64 rng = make_engine(12, 0);
  std::uniform_real_distribution<double> ld(-3.0, 3.0);
  std::size_t pairs = 0, bad = 0;
  for (int rep = 0; rep < 200; ++rep) {
    Sample s = random_sample(rng, 10, rep % 4 == 0);
    StepFit fit = pava_fit(s);
    std::vector<double> levels = s.y;
    levels.insert(levels.end(), fit.values.begin(), fit.values.end());
    for (int k = 0; k < 3; ++k) levels.push_back(ld(rng));
    for (double x : s.x) {
      for (double level : levels) {
        auto [lhs, rhs] = verify_switching(s, level, x);
        ++pairs;
        if (lhs != rhs) ++bad;
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu (level, point) pairs, %zu mismatches, %.1fs", pairs,
                bad, t.elapsed());
  detail = buf;
  return bad == 0 && t.elapsed() < 5.0;
}

// ------------------------------------------------------------ criteria 3 and 4

struct CellRef {
  double bias, mse;
};

// Printed reference values, indexed [dgp-1][n index] with n in {200, 500, 1000}.
struct TableRef {
  CellRef irdd[4][3];
  CellRef lp[4][3];
  CellRef knn[4][3];
};

const TableRef kHomoRef = {
    // irdd
    {{{0.001, 0.043}, {-0.009, 0.022}, {-0.008, 0.013}},
     {{-0.111, 0.092}, {-0.079, 0.049}, {-0.063, 0.031}},
     {{-0.131, 0.057}, {-0.114, 0.031}, {-0.098, 0.020}},
     {{-0.337, 0.158}, {-0.261, 0.087}, {-0.213, 0.055}}},
    // lp
    {{{0.008, 0.319}, {-0.007, 0.110}, {-0.002, 0.056}},
     {{0.003, 0.747}, {-0.002, 0.225}, {0.001, 0.102}},
     {{-0.002, 0.322}, {-0.005, 0.109}, {0.001, 0.056}},
     {{-0.019, 0.774}, {-0.021, 0.213}, {-0.007, 0.104}}},
    // knn
    {{{0.010, 0.500}, {0.010, 0.280}, {0.000, 0.220}},
     {{0.040, 0.500}, {0.010, 0.290}, {0.000, 0.220}},
     {{0.030, 0.510}, {0.010, 0.290}, {0.010, 0.220}},
     {{0.050, 0.490}, {0.010, 0.290}, {0.010, 0.220}}}};

const TableRef kHeteroRef = {
    // irdd
    {{{0.005, 0.043}, {-0.007, 0.022}, {-0.007, 0.013}},
     {{-0.101, 0.093}, {-0.075, 0.049}, {-0.061, 0.031}},
     {{-0.127, 0.057}, {-0.111, 0.031}, {-0.096, 0.020}},
     {{-0.286, 0.155}, {-0.223, 0.084}, {-0.181, 0.052}}},
    // lp
    {{{0.009, 0.319}, {-0.008, 0.111}, {-0.001, 0.056}},
     {{0.006, 0.791}, {0.000, 0.224}, {-0.000, 0.103}},
     {{-0.004, 0.323}, {-0.005, 0.109}, {0.000, 0.057}},
     {{-0.019, 0.754}, {-0.019, 0.213}, {-0.009, 0.104}}},
    // knn
    {{{0.010, 0.490}, {0.010, 0.280}, {0.000, 0.220}},
     {{0.090, 0.210}, {0.040, 0.090}, {0.030, 0.070}},
     {{0.020, 0.510}, {0.020, 0.280}, {0.000, 0.230}},
     {{0.020, 0.490}, {0.000, 0.280}, {0.010, 0.210}}}};

const char* estimator_label(mc::Estimator est) {
  switch (est) {
    case mc::Estimator::irdd: return "irdd";
    case mc::Estimator::knn: return "knn";
    default: return "ll";
  }
}

bool cell_ok(mc::Estimator est, const CellRef& ref, const mc::McRow& row,
             std::string& flags) {
  // irdd and knn: bias within +-0.02, mse within +-15%; local linear carries
  // a widened band because its bandwidth selector is a plain rule of thumb
  bool widened = est == mc::Estimator::local_linear;
  double bias_tol = widened ? std::max(0.02, 0.4 * std::fabs(ref.bias)) : 0.02;
  double lo = widened ? 0.6 : 0.85, hi = widened ? 1.4 : 1.15;
  bool bias_ok = std::fabs(row.bias - ref.bias) <= bias_tol;
  double ratio = row.mse / ref.mse;
  bool mse_ok = ratio >= lo && ratio <= hi;
  flags.clear();
  if (!bias_ok) flags += " BIAS-OFF";
  if (!mse_ok) flags += " MSE-OFF";
  return bias_ok && mse_ok;
}

bool criterion_table(mc::Noise noise, const TableRef& ref, std::string& detail) {
  Timer t;
  std::vector<mc::DgpSpec> dgps;
  for (int id = 1; id <= 4; ++id) dgps.push_back(mc::dgp(id, noise));
  std::vector<std::size_t> sizes{200, 500, 1000};
  std::vector<mc::Estimator> ests{mc::Estimator::irdd, mc::Estimator::local_linear,
                                  mc::Estimator::knn};
  mc::McSettings ms;  // 1000 reps, seed 1, c=1, a=1/3, pooled offsets
  mc::McReport rep = mc::mc_table(dgps, sizes, ests, ms);

  std::size_t failed = 0;
  for (const mc::McRow& row : rep.rows) {
    std::size_t ni = row.n == 200 ? 0 : row.n == 500 ? 1 : 2;
    const CellRef* block = row.est == mc::Estimator::irdd  ? ref.irdd[row.dgp - 1]
                           : row.est == mc::Estimator::knn ? ref.knn[row.dgp - 1]
                                                           : ref.lp[row.dgp - 1];
    const CellRef& cell = block[ni];
    std::string flags;
    bool ok = cell_ok(row.est, cell, row, flags);
    if (!ok) ++failed;
    std::printf("    [%-4s] dgp %d n %4zu: bias %+.4f (ref %+.3f) mse %.4f (ref %.3f)%s%s\n",
                estimator_label(row.est), row.dgp, row.n, row.bias, cell.bias, row.mse,
                cell.mse, row.skips ? (" skips " + std::to_string(row.skips)).c_str() : "",
                ok ? "" : flags.c_str());
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu of %zu cells outside tolerance, %.0fs", failed,
                rep.rows.size(), t.elapsed());
  detail = buf;
  return failed == 0;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_coverage(std::string& detail) {
  Timer t;
  const double ref_cov[3] = {0.892, 0.910, 0.909};
  const double ref_len[3] = {1.108, 0.897, 0.763};
  mc::CoverageSettings cs;  // 1000 x 499 reps, seed 1, pooled, recentred
  mc::CoverageReport rep =
      mc::coverage_table({mc::dgp(1)}, {200, 500, 1000}, {1.0}, cs);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const mc::CoverageRow& row = rep.rows[i];
    bool cov_ok = std::fabs(row.coverage - ref_cov[i]) <= 0.03;
    double ratio = row.mean_length / ref_len[i];
    bool len_ok = ratio >= 0.9 && ratio <= 1.1;
    if (!cov_ok || !len_ok) ++failed;
    std::printf("    n %4zu: coverage %.3f (ref %.3f)%s length %.4f (ref %.3f)%s\n", row.n,
                row.coverage, ref_cov[i], cov_ok ? "" : " COV-OFF", row.mean_length,
                ref_len[i], len_ok ? "" : " LEN-OFF");
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu of %zu cells outside tolerance, %.0fs", failed,
                rep.rows.size(), t.elapsed());
  detail = buf;
  return failed == 0;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_inconsistency(std::string& detail) {
  Timer t;
  auto d3 = mc::dgp(3);
  const double true_plus = 1.0;  // mean(0) + jump
  double naive_bias[3] = {0, 0, 0}, corr_bias[3] = {0, 0, 0};
  std::size_t order_bad = 0, bracketed = 0;
  const std::size_t sizes[3] = {200, 1000, 5000};
  for (int si = 0; si < 3; ++si) {
    std::size_t n = sizes[si];
    std::vector<double> nb, cb;
    std::uint64_t master = derive_seed(606, n);
    for (std::size_t r = 0; r < 1000; ++r) {
      std::mt19937_64 rng = make_engine(master, r);
      Sample s = mc::dgp_sample(d3, n, rng);
      Sample sorted = s.sorted_by_x();
      std::size_t k = static_cast<std::size_t>(
          std::lower_bound(sorted.x.begin(), sorted.x.end(), 0.0) - sorted.x.begin());
      Sample plus;
      plus.x.assign(sorted.x.begin() + k, sorted.x.end());
      plus.y.assign(sorted.y.begin() + k, sorted.y.end());
      nb.push_back(naive_boundary_left(plus) - true_plus);
      cb.push_back(boundary_corrected_left(plus, 1.0, 1.0 / 3.0) - true_plus);

      RddConfig cfg;
      RddEstimate est = sharp_estimate(s, cfg);
      if (est.naive_theta && k >= 1 && est.eval_plus >= sorted.x[k] &&
          est.eval_minus <= sorted.x[k - 1]) {
        ++bracketed;
        if (*est.naive_theta > est.theta + 1e-12) ++order_bad;
      }
    }
    naive_bias[si] = mean(nb);
    corr_bias[si] = mean(cb);
  }
  bool stays_low = naive_bias[0] < -0.05 && naive_bias[1] < -0.05 && naive_bias[2] < -0.05;
  bool no_shrink = naive_bias[2] <= naive_bias[0] + 0.05;
  bool corr_shrinks = std::fabs(corr_bias[1]) < std::fabs(corr_bias[0]) &&
                      std::fabs(corr_bias[2]) < std::fabs(corr_bias[1]);
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "naive bias {%.3f, %.3f, %.3f}, corrected {%.3f, %.3f, %.3f}, "
                "ordering breaches %zu/%zu, %.0fs",
                naive_bias[0], naive_bias[1], naive_bias[2], corr_bias[0], corr_bias[1],
                corr_bias[2], order_bad, bracketed, t.elapsed());
  detail = buf;
  return stays_low && no_shrink && corr_shrinks && order_bad == 0 && bracketed > 2500;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_limit_law(std::string& detail) {
  Timer t;
  auto d1 = mc::dgp(1);
  double sum_big = 0, sum_small = 0, sum_self = 0;
  for (int rep = 0; rep < 5; ++rep) {
    std::uint64_t seed = derive_seed(4242, rep);
    sum_big += limits::verify_clt(d1, 1.0 / 3.0, 1.0, 5000, 2000, seed).ks;
    sum_small += limits::verify_clt(d1, 1.0 / 3.0, 1.0, 200, 2000, derive_seed(seed, 9)).ks;

    // noise floor: KS between two independent 2000-draw batches of the limit
    limits::SharpLimitSpec lim;
    lim.plus = {limits::Regime::boundary_third, d1.sigma2_0, d1.f0, d1.slope_plus, 1.0};
    lim.minus = {limits::Regime::boundary_third, d1.sigma2_0, d1.f0, d1.slope_minus, 1.0};
    std::vector<double> a(2000), b(2000);
    std::uint64_t sa = derive_seed(seed, 101), sb = derive_seed(seed, 102);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = limits::sharp_limit_draw(lim, derive_seed(sa, i));
      b[i] = limits::sharp_limit_draw(lim, derive_seed(sb, i));
    }
    sum_self += ks_distance(a, b);
  }
  double big = sum_big / 5, small = sum_small / 5, threshold = 2.0 * sum_self / 5;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mean KS: n=5000 %.4f, n=200 %.4f, two-batch threshold %.4f, %.0fs", big,
                small, threshold, t.elapsed());
  detail = buf;
  return big < threshold && big <= small;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_cstar(std::string& detail) {
  Timer t;
  limits::CStarCurve curve = limits::estimate_cstar(100000, 2023);
  char buf[120];
  std::snprintf(buf, sizeof buf, "c* = %.3f from 100000 draws, %.0fs", curve.c_star,
                t.elapsed());
  detail = buf;
  return curve.c_star >= 0.25 && curve.c_star <= 0.45;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_election(const std::string& source_dir, std::string& detail,
                        bool& skipped) {
  std::string path = source_dir + "/data/lee1946_1998.csv";
  if (!std::filesystem::exists(path)) {
    skipped = true;
    detail = "dataset not present at " + path;
    return true;
  }
  Timer t;
  io::CsvColumns cols;  // columns named x (margin) and y (next vote share)
  Sample s;
  try {
    s = io::read_csv(path, cols);
  } catch (const std::exception& e) {
    detail = std::string("dataset unreadable: ") + e.what();
    return false;
  }

  RddConfig cfg;
  cfg.offsets = OffsetConvention::pooled;
  RddEstimate est = sharp_estimate(s, cfg);

  boot::BootstrapConfig bcfg;
  bcfg.seed = 1;
  bcfg.offsets = OffsetConvention::pooled;
  boot::BootstrapReport ci = boot::sharp_wild_ci(s, bcfg);

  bool point_ok = std::fabs(est.theta - 0.138) <= 0.02;
  bool naive_ok = est.naive_theta && std::fabs(*est.naive_theta - 0.066) <= 0.02;
  bool ci_ok = std::fabs(ci.lower - 0.066) <= 0.02 && std::fabs(ci.upper - 0.265) <= 0.02;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "theta %.4f (ref 0.138), naive %.4f (ref 0.066), ci [%.4f, %.4f] "
                "(ref [0.066, 0.265]), %.0fs",
                est.theta, est.naive_theta ? *est.naive_theta : std::nan(""), ci.lower,
                ci.upper, t.elapsed());
  detail = buf;
  return point_ok && naive_ok && ci_ok;
}

// --------------------------------------------------------------- criterion 10

bool criterion_bootstrap_ordering(std::string& detail) {
  Timer t;
  auto d3 = mc::dgp(3);
  RddConfig rcfg;
  rcfg.a = 0.5;
  rcfg.offsets = OffsetConvention::pooled;

  std::vector<double> exact;
  exact.reserve(2000);
  std::uint64_t mc_master = derive_seed(1010, 1);
  for (std::size_t r = 0; r < 2000; ++r) {
    std::mt19937_64 rng = make_engine(mc_master, r);
    Sample s = mc::dgp_sample(d3, 1000, rng);
    exact.push_back(sharp_estimate(s, rcfg).theta - d3.theta);
  }

  std::mt19937_64 rng = make_engine(derive_seed(1010, 2), 0);
  Sample base = mc::dgp_sample(d3, 1000, rng);
  boot::BootstrapConfig bcfg;
  bcfg.reps = 2000;
  bcfg.seed = derive_seed(1010, 100);
  bcfg.offsets = OffsetConvention::pooled;
  double ks_trimmed = ks_distance(boot::sharp_wild_ci(base, bcfg).replicates, exact);
  double ks_naive = ks_distance(boot::naive_wild_ci(base, bcfg).replicates, exact);

  char buf[120];
  std::snprintf(buf, sizeof buf, "KS to exact law: trimmed %.4f, naive %.4f, %.0fs",
                ks_trimmed, ks_naive, t.elapsed());
  detail = buf;
  return ks_trimmed < ks_naive;
}

}  // namespace

int main(int argc, char** argv) {
  std::string source_dir = argc > 1 ? argv[1] : ".";
  bool all_ok = true;

  auto report = [&](int id, bool pass, bool skipped, const std::string& detail) {
    const char* verdict = skipped ? "SKIP" : pass ? "PASS" : "FAIL";
    std::printf("criterion %d: %s (%s)\n", id, verdict, detail.c_str());
    std::fflush(stdout);
    if (!skipped && !pass) all_ok = false;
  };

  std::string detail;

  report(1, criterion_oracle(detail), false, detail);
  report(2, criterion_switching(detail), false, detail);

  std::printf("criterion 3 cells (homoskedastic designs):\n");
  bool t3 = criterion_table(mc::Noise::homoskedastic, kHomoRef, detail);
  report(3, t3, false, detail);

  std::printf("criterion 4 cells (heteroskedastic designs):\n");
  bool t4 = criterion_table(mc::Noise::heteroskedastic, kHeteroRef, detail);
  report(4, t4, false, detail);

  std::printf("criterion 5 cells (interval coverage, design 1, c = 1):\n");
  report(5, criterion_coverage(detail), false, detail);

  report(6, criterion_inconsistency(detail), false, detail);
  report(7, criterion_limit_law(detail), false, detail);
  report(8, criterion_cstar(detail), false, detail);

  bool skipped = false;
  bool ok9 = criterion_election(source_dir, detail, skipped);
  report(9, ok9, skipped, detail);

  report(10, criterion_bootstrap_ordering(detail), false, detail);

  std::printf("acceptance: %s\n", all_ok ? "all non-skipped criteria pass"
                                         : "at least one criterion failed");
  return all_ok ? 0 : 1;
}
