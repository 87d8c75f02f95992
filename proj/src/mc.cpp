#include "irdd/mc.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irdd/baselines.hpp"
#include "irdd/rng.hpp"
#include "irdd/stats.hpp"

namespace irdd::mc {

namespace {

double mean_exp(double x) { return std::exp(0.25 * x); }
double mean_cubic(double x) { return x * x * x + 0.25 * x; }
double mean_steep_drop(double x) {
  // increasing before the cutoff, steeply decreasing after it
  return x >= 0 ? 1.0 - std::exp(4.0 * x) : 0.2 * x;
}
double mean_bump(double x) {
  // steeply increasing on [0, 0.5), decreasing on [0.5, 1]
  const double e125 = std::exp(-1.25);
  if (x >= 0.5) return -e125 + std::exp(-(x - 0.5) * (x - 0.5));
  if (x >= 0.0) return -(e125 - std::exp(-5.0 * (x - 0.5) * (x - 0.5)));
  return 0.2 * x;
}

constexpr double kDensityBeta22 = 0.75;             // (3/4)(1-x^2) at 0
const double kDensityBeta05 = 1.0 / 3.14159265358979323846;  // arcsine law at 0

std::uint64_t cell_seed(std::uint64_t master, const DgpSpec& spec, std::size_t n,
                        std::uint64_t extra = 0) {
  // keyed by cell values, not list positions, so reordering inputs never
  // moves a cell to a different stream
  std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(spec.id));
  s = derive_seed(s, spec.noise == Noise::heteroskedastic ? 2 : 1);
  s = derive_seed(s, n);
  return extra ? derive_seed(s, extra) : s;
}

struct Accum {
  std::vector<double> draws;
  std::size_t skips = 0;
};

}  // namespace

double DgpSpec::sigma(double x) const {
  return noise == Noise::heteroskedastic ? std::sqrt(x + 1.0) : 1.0;
}

DgpSpec dgp(int id, Noise noise) {
  DgpSpec s;
  s.id = id;
  s.noise = noise;
  s.xlaw = (id % 2 == 1) ? XLaw::beta22 : XLaw::beta05;
  s.f0 = (s.xlaw == XLaw::beta22) ? kDensityBeta22 : kDensityBeta05;
  switch (id) {
    case 1:
    case 2:
      s.mean = mean_exp;
      s.slope_minus = 0.25;
      s.slope_plus = 0.25;
      break;
    case 3:
    case 4:
      s.mean = mean_cubic;
      s.slope_minus = 0.25;
      s.slope_plus = 0.25;
      break;
    case 5:
    case 6:
      s.mean = mean_steep_drop;
      s.slope_minus = 0.2;
      s.slope_plus = -4.0;
      break;
    case 7:
    case 8:
      s.mean = mean_bump;
      s.slope_minus = 0.2;
      s.slope_plus = 5.0 * std::exp(-1.25);
      break;
    default:
      throw std::invalid_argument("dgp: id must be 1..8");
  }
  return s;
}

Sample dgp_sample(const DgpSpec& spec, std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw std::invalid_argument("dgp_sample: n must be >= 1");
  if (spec.mean == nullptr) throw std::invalid_argument("dgp_sample: spec has no mean function");
  double alpha = spec.xlaw == XLaw::beta22 ? 2.0 : 0.5;
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Sample s;
  s.x.resize(n);
  s.y.resize(n);
  s.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double g1 = gamma(rng), g2 = gamma(rng);
    double x = 2.0 * (g1 / (g1 + g2)) - 1.0;
    bool treated = x >= 0.0;
    s.x[i] = x;
    s.y[i] = spec.mean(x) + (treated ? spec.theta : 0.0) + spec.sigma(x) * normal(rng);
    s.d[i] = treated ? 1 : 0;
  }
  return s;
}

McReport mc_table(const std::vector<DgpSpec>& dgps, const std::vector<std::size_t>& sizes,
                  const std::vector<Estimator>& estimators, const McSettings& settings) {
  if (settings.reps == 0) throw std::invalid_argument("mc_table: reps must be >= 1");
  McReport report;
  report.settings = settings;
  for (const DgpSpec& spec : dgps) {
    for (std::size_t n : sizes) {
      std::uint64_t cseed = cell_seed(settings.seed, spec, n);
      std::vector<Accum> acc(estimators.size());
      for (Accum& a : acc) a.draws.reserve(settings.reps);

      RddConfig cfg;
      cfg.cutoff = 0.0;
      cfg.c = settings.c;
      cfg.a = settings.a;
      cfg.offsets = settings.offsets;

      for (std::size_t r = 0; r < settings.reps; ++r) {
        std::mt19937_64 rng = make_engine(cseed, r);
        Sample sample = dgp_sample(spec, n, rng);
        for (std::size_t e = 0; e < estimators.size(); ++e) {
          try {
            double theta;
            switch (estimators[e]) {
              case Estimator::irdd:
                theta = sharp_estimate(sample, cfg).theta;
                break;
              case Estimator::irdd_mse: {
                if (!(spec.slope_minus > 0) || !(spec.slope_plus > 0))
                  throw degenerate_window_error("mse-optimal offset needs positive slopes");
                Sample sorted = sample.sorted_by_x();
                std::size_t k = static_cast<std::size_t>(
                    std::lower_bound(sorted.x.begin(), sorted.x.end(), 0.0) - sorted.x.begin());
                if (k == 0 || k == sorted.size())
                  throw insufficient_data_error("empty side", k, sorted.size() - k);
                Sample left, right;
                left.x.assign(sorted.x.begin(), sorted.x.begin() + k);
                left.y.assign(sorted.y.begin(), sorted.y.begin() + k);
                right.x.assign(sorted.x.begin() + k, sorted.x.end());
                right.y.assign(sorted.y.begin() + k, sorted.y.end());
                double mp = optimal_c_eval_left(right, spec.slope_plus, spec.sigma2_0, spec.f0);
                double mm = optimal_c_eval_right(left, spec.slope_minus, spec.sigma2_0, spec.f0);
                theta = mp - mm;
                break;
              }
              case Estimator::knn: {
                baselines::BaselineConfig bc;
                bc.method = baselines::BaselineMethod::knn;
                theta = baselines::sharp_baseline_estimate(sample, 0.0, bc).theta;
                break;
              }
              case Estimator::local_linear: {
                baselines::BaselineConfig bc;
                bc.method = baselines::BaselineMethod::local_linear;
                theta = baselines::sharp_baseline_estimate(sample, 0.0, bc).theta;
                break;
              }
              default:
                throw std::invalid_argument("mc_table: unknown estimator");
            }
            acc[e].draws.push_back(theta);
          } catch (const insufficient_data_error&) {
            ++acc[e].skips;
          } catch (const degenerate_window_error&) {
            ++acc[e].skips;
          }
        }
      }

      for (std::size_t e = 0; e < estimators.size(); ++e) {
        McRow row;
        row.dgp = spec.id;
        row.noise = spec.noise;
        row.n = n;
        row.est = estimators[e];
        row.reps = acc[e].draws.size();
        row.skips = acc[e].skips;
        if (acc[e].draws.empty()) {
          row.bias = row.variance = row.mse = std::numeric_limits<double>::quiet_NaN();
        } else {
          row.bias = mean(acc[e].draws) - spec.theta;
          row.variance = population_variance(acc[e].draws);
          row.mse = row.bias * row.bias + row.variance;
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

CoverageReport coverage_table(const std::vector<DgpSpec>& dgps,
                              const std::vector<std::size_t>& sizes,
                              const std::vector<double>& c_grid,
                              const CoverageSettings& settings) {
  if (settings.reps == 0) throw std::invalid_argument("coverage_table: reps must be >= 1");
  CoverageReport report;
  report.settings = settings;
  for (const DgpSpec& spec : dgps) {
    for (std::size_t n : sizes) {
      for (double c : c_grid) {
        std::uint64_t cseed =
            cell_seed(settings.seed, spec, n, std::bit_cast<std::uint64_t>(c));
        std::size_t covered = 0, used = 0, skips = 0;
        double length_sum = 0;
        boot::BootstrapConfig bcfg;
        bcfg.cutoff = 0.0;
        bcfg.c = c;
        bcfg.a = 0.5;
        bcfg.reps = settings.boot_reps;
        bcfg.level = settings.level;
        bcfg.multiplier = settings.multiplier;
        bcfg.flavor = settings.flavor;
        bcfg.offsets = settings.offsets;
        for (std::size_t r = 0; r < settings.reps; ++r) {
          std::mt19937_64 rng = make_engine(cseed, r);
          Sample sample = dgp_sample(spec, n, rng);
          bcfg.seed = derive_seed(derive_seed(cseed, r), 1);  // per-rep boot master
          try {
            boot::BootstrapReport rep = boot::sharp_wild_ci(sample, bcfg);
            ++used;
            if (rep.lower <= spec.theta && spec.theta <= rep.upper) ++covered;
            length_sum += rep.upper - rep.lower;
          } catch (const insufficient_data_error&) {
            ++skips;
          }
        }
        CoverageRow row;
        row.dgp = spec.id;
        row.noise = spec.noise;
        row.n = n;
        row.c = c;
        row.reps = used;
        row.boot_reps = settings.boot_reps;
        row.skips = skips;
        if (used == 0) {
          row.coverage = row.mean_length = std::numeric_limits<double>::quiet_NaN();
        } else {
          row.coverage = static_cast<double>(covered) / static_cast<double>(used);
          row.mean_length = length_sum / static_cast<double>(used);
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

}  // namespace irdd::mc
