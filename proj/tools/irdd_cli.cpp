// Command-line front end: fit / rdd / ci / mc / limit / cstar.
//
// Exit codes: 0 success, 2 flag usage, 3 configuration, 4 input data,
// 5 estimation (empty side, weak treatment jump, degenerate window).
// Every stochastic command requires an explicit --seed; given the same input
// bytes, flags and seed, reruns are byte-identical.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irdd/baselines.hpp"
#include "irdd/bootstrap.hpp"
#include "irdd/io.hpp"
#include "irdd/isotonic.hpp"
#include "irdd/limits.hpp"
#include "irdd/mc.hpp"
#include "irdd/rdd.hpp"
#include "irdd/rng.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kVersion = "0.1.0";

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_out(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

// Sidecar with the effective settings, next to file outputs of the
// stochastic commands.
void write_sidecar(const std::string& output, json meta) {
  if (output.empty()) return;
  meta["schema_version"] = kSchemaVersion;
  meta["version"] = kVersion;
  std::ofstream out(output + ".meta.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + output + ".meta.json");
  out << meta.dump(2) << '\n';
}

struct CsvFlags {
  std::string path, x_col = "x", y_col = "y", d_col;
};

void add_csv_flags(CLI::App* cmd, CsvFlags& f, bool need_d_option) {
  cmd->add_option("--input", f.path, "input CSV file")->required();
  cmd->add_option("--x-col", f.x_col, "running-variable column name");
  cmd->add_option("--y-col", f.y_col, "outcome column name");
  if (need_d_option) cmd->add_option("--d-col", f.d_col, "treatment column name");
}

irdd::Sample load(const CsvFlags& f) {
  irdd::io::CsvColumns cols;
  cols.x = f.x_col;
  cols.y = f.y_col;
  cols.d = f.d_col;
  return irdd::io::read_csv(f.path, cols);
}

irdd::boot::Multiplier parse_multiplier(const std::string& s) {
  if (s == "rademacher") return irdd::boot::Multiplier::rademacher;
  if (s == "gaussian") return irdd::boot::Multiplier::gaussian;
  if (s == "mammen") return irdd::boot::Multiplier::mammen;
  throw config_error("unknown multiplier '" + s + "'");
}

irdd::OffsetConvention parse_offsets(const std::string& s) {
  if (s == "per-side") return irdd::OffsetConvention::per_side;
  if (s == "pooled") return irdd::OffsetConvention::pooled;
  throw config_error("unknown offset convention '" + s + "'");
}

json config_echo(std::initializer_list<std::pair<std::string, json>> kv) {
  json j;
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

// ---- fit ----------------------------------------------------------------

int run_fit(const CsvFlags& csv, bool decreasing, const std::string& format,
            const std::string& output) {
  irdd::Sample s = load(csv);
  if (decreasing)
    for (double& y : s.y) y = -y;
  irdd::StepFit fit = irdd::pava_fit(s);
  if (decreasing)
    for (double& v : fit.values) v = -v;

  if (format == "csv") {
    std::ostringstream os;
    os.precision(10);
    os << "knot,value\n";
    for (std::size_t i = 0; i < fit.knots.size(); ++i)
      os << fit.knots[i] << ',' << fit.values[i] << '\n';
    write_out(output, os.str());
  } else {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "fit";
    j["config"] = config_echo({{"input", csv.path},
                               {"x_col", csv.x_col},
                               {"y_col", csv.y_col},
                               {"decreasing", decreasing}});
    j["n"] = s.size();
    j["knots"] = fit.knots;
    j["values"] = fit.values;
    write_out(output, j.dump(2) + "\n");
  }
  return 0;
}

// ---- rdd ----------------------------------------------------------------

json estimate_to_json(const irdd::RddEstimate& est) {
  json j;
  j["theta"] = est.theta;
  j["m_minus"] = est.m_minus;
  j["m_plus"] = est.m_plus;
  if (est.naive_theta)
    j["naive_theta"] = *est.naive_theta;
  else
    j["naive_theta"] = nullptr;
  if (est.p_minus) j["p_minus"] = *est.p_minus;
  if (est.p_plus) j["p_plus"] = *est.p_plus;
  j["eval_minus"] = est.eval_minus;
  j["eval_plus"] = est.eval_plus;
  j["n_minus"] = est.n_minus;
  j["n_plus"] = est.n_plus;
  j["clamped_minus"] = est.clamped_minus;
  j["clamped_plus"] = est.clamped_plus;
  return j;
}

int run_rdd(const CsvFlags& csv, const irdd::RddConfig& cfg, bool fuzzy,
            const std::string& method, std::size_t k, double bandwidth,
            const std::string& offsets, const std::string& output) {
  irdd::Sample s = load(csv);
  irdd::RddEstimate est;
  if (method == "isotonic") {
    est = fuzzy ? irdd::fuzzy_estimate(s, cfg) : irdd::sharp_estimate(s, cfg);
  } else {
    if (fuzzy) throw config_error("--fuzzy requires --method isotonic");
    irdd::baselines::BaselineConfig bc;
    bc.method = method == "knn" ? irdd::baselines::BaselineMethod::knn
                                : irdd::baselines::BaselineMethod::local_linear;
    bc.k = k;
    bc.bandwidth = bandwidth;
    est = irdd::baselines::sharp_baseline_estimate(s, cfg.cutoff, bc);
  }

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "rdd";
  j["config"] = config_echo({{"input", csv.path},
                             {"x_col", csv.x_col},
                             {"y_col", csv.y_col},
                             {"d_col", csv.d_col},
                             {"cutoff", cfg.cutoff},
                             {"c", cfg.c},
                             {"a", cfg.a},
                             {"offsets", offsets},
                             {"method", method},
                             {"fuzzy", fuzzy},
                             {"k", k},
                             {"bandwidth", bandwidth}});
  j["estimate"] = estimate_to_json(est);
  write_out(output, j.dump(2) + "\n");
  return 0;
}

// ---- ci -----------------------------------------------------------------

int run_ci(const CsvFlags& csv, irdd::boot::BootstrapConfig cfg, bool fuzzy,
           const std::string& multiplier, const std::string& flavor,
           const std::string& offsets, const std::string& output) {
  if (fuzzy)
    throw config_error(
        "no bootstrap consistency result backs the fuzzy design; "
        "confidence intervals are provided for the sharp design only");
  irdd::Sample s = load(csv);
  irdd::boot::BootstrapReport rep = irdd::boot::sharp_wild_ci(s, cfg);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "ci";
  j["config"] = config_echo({{"input", csv.path},
                             {"x_col", csv.x_col},
                             {"y_col", csv.y_col},
                             {"cutoff", cfg.cutoff},
                             {"c", cfg.c},
                             {"reps", cfg.reps},
                             {"level", cfg.level},
                             {"multiplier", multiplier},
                             {"flavor", flavor},
                             {"offsets", offsets},
                             {"seed", cfg.seed}});
  json r;
  r["point"] = rep.point;
  r["lower"] = rep.lower;
  r["upper"] = rep.upper;
  r["level"] = rep.level;
  r["reps"] = rep.reps;
  r["low_reps_warning"] = rep.low_reps_warning;
  j["interval"] = r;
  write_out(output, j.dump(2) + "\n");
  return 0;
}

// ---- mc -----------------------------------------------------------------

int run_mc(const std::vector<int>& dgps, const std::vector<std::size_t>& sizes,
           const std::vector<std::string>& estimators, bool hetero, bool coverage,
           const std::vector<double>& c_grid, irdd::mc::McSettings ms,
           irdd::mc::CoverageSettings cs, const std::string& output, const json& echo) {
  irdd::mc::Noise noise =
      hetero ? irdd::mc::Noise::heteroskedastic : irdd::mc::Noise::homoskedastic;
  std::vector<irdd::mc::DgpSpec> specs;
  for (int id : dgps) specs.push_back(irdd::mc::dgp(id, noise));

  std::string body;
  if (coverage) {
    body = irdd::io::to_csv(irdd::mc::coverage_table(specs, sizes, c_grid, cs));
  } else {
    std::vector<irdd::mc::Estimator> ests;
    for (const std::string& e : estimators) {
      if (e == "irdd")
        ests.push_back(irdd::mc::Estimator::irdd);
      else if (e == "irdd-mse")
        ests.push_back(irdd::mc::Estimator::irdd_mse);
      else if (e == "knn")
        ests.push_back(irdd::mc::Estimator::knn);
      else if (e == "local-linear")
        ests.push_back(irdd::mc::Estimator::local_linear);
      else
        throw config_error("unknown estimator '" + e + "'");
    }
    body = irdd::io::to_csv(irdd::mc::mc_table(specs, sizes, ests, ms));
  }
  write_out(output, body);
  write_sidecar(output, echo);
  return 0;
}

// ---- limit --------------------------------------------------------------

int run_limit(const std::string& regime, std::size_t reps, std::uint64_t seed,
              const irdd::limits::LimitSpec& plus, const irdd::limits::LimitSpec& minus,
              const irdd::limits::ProcessGrid& grid, const std::string& format,
              const std::string& output, const json& echo) {
  std::vector<double> draws(reps);
  if (regime == "chernoff") {
    for (std::size_t r = 0; r < reps; ++r)
      draws[r] = irdd::limits::chernoff_draw(irdd::derive_seed(seed, r), grid);
  } else if (regime == "sharp") {
    irdd::limits::SharpLimitSpec spec{plus, minus};
    for (std::size_t r = 0; r < reps; ++r)
      draws[r] = irdd::limits::sharp_limit_draw(spec, irdd::derive_seed(seed, r), grid);
  } else {
    for (std::size_t r = 0; r < reps; ++r)
      draws[r] = irdd::limits::limit_draw(plus, irdd::derive_seed(seed, r), grid);
  }

  if (format == "json") {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "limit";
    j["config"] = echo;
    j["draws"] = draws;
    write_out(output, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os.precision(10);
    os << "draw\n";
    for (double d : draws) os << d << '\n';
    write_out(output, os.str());
    write_sidecar(output, echo);
  }
  return 0;
}

// ---- cstar --------------------------------------------------------------

int run_cstar(std::size_t reps, std::uint64_t seed, double c_min, double c_max,
              double c_step, const irdd::limits::ProcessGrid& grid,
              const std::string& output, const json& echo) {
  irdd::limits::CStarCurve curve =
      irdd::limits::estimate_cstar(reps, seed, grid, c_min, c_max, c_step);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "cstar";
  j["config"] = echo;
  j["c_star"] = curve.c_star;
  j["c"] = curve.c;
  j["objective"] = curve.objective;
  write_out(output, j.dump(2) + "\n");
  write_sidecar(output, echo);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isotonic regression discontinuity estimation"};
  app.set_version_flag("--version", std::string("irdd ") + kVersion);
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "isotonic least-squares fit of y on x");
  CsvFlags fit_csv;
  add_csv_flags(fit, fit_csv, false);
  bool fit_decreasing = false;
  std::string fit_format = "csv", fit_output;
  fit->add_flag("--decreasing", fit_decreasing, "fit a non-increasing function");
  fit->add_option("--format", fit_format)->check(CLI::IsMember({"csv", "json"}));
  fit->add_option("--output", fit_output, "output path (default stdout)");

  // rdd
  auto* rdd = app.add_subcommand("rdd", "discontinuity estimate at the cutoff");
  CsvFlags rdd_csv;
  add_csv_flags(rdd, rdd_csv, true);
  irdd::RddConfig rdd_cfg;
  bool rdd_fuzzy = false;
  std::string rdd_method = "isotonic", rdd_offsets = "per-side", rdd_output;
  std::size_t rdd_k = 0;
  double rdd_bw = 0.0;
  rdd->add_option("--cutoff", rdd_cfg.cutoff);
  rdd->add_option("--c", rdd_cfg.c, "boundary offset scale");
  rdd->add_option("--a", rdd_cfg.a, "boundary offset exponent");
  rdd->add_flag("--fuzzy", rdd_fuzzy, "ratio estimate using the treatment column");
  rdd->add_option("--method", rdd_method)
      ->check(CLI::IsMember({"isotonic", "knn", "local-linear"}));
  rdd->add_option("--k", rdd_k, "k-NN neighbor count (0: floor(n^{1/3}))");
  rdd->add_option("--bandwidth", rdd_bw, "local linear bandwidth (0: rule of thumb)");
  rdd->add_option("--offsets", rdd_offsets)->check(CLI::IsMember({"per-side", "pooled"}));
  rdd->add_option("--output", rdd_output, "output path (default stdout)");

  // ci
  auto* ci = app.add_subcommand("ci", "trimmed wild-bootstrap confidence interval");
  CsvFlags ci_csv;
  add_csv_flags(ci, ci_csv, true);
  irdd::boot::BootstrapConfig ci_cfg;
  bool ci_fuzzy = false;
  std::string ci_mult = "rademacher", ci_flavor = "recenter", ci_offsets = "per-side",
              ci_output;
  std::uint64_t ci_seed = 0;
  ci->add_option("--cutoff", ci_cfg.cutoff);
  ci->add_option("--c", ci_cfg.c, "trim offset scale");
  ci->add_option("--reps", ci_cfg.reps, "bootstrap replicates");
  ci->add_option("--level", ci_cfg.level, "confidence level");
  ci->add_option("--multiplier", ci_mult)
      ->check(CLI::IsMember({"rademacher", "gaussian", "mammen"}));
  ci->add_option("--flavor", ci_flavor)->check(CLI::IsMember({"recenter", "percentile"}));
  ci->add_option("--offsets", ci_offsets)->check(CLI::IsMember({"per-side", "pooled"}));
  ci->add_flag("--fuzzy", ci_fuzzy, "refused: sharp designs only");
  ci->add_option("--seed", ci_seed, "RNG seed (required)")->required();
  ci->add_option("--output", ci_output, "output path (default stdout)");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo bias/variance/MSE or coverage tables");
  std::vector<int> mc_dgps{1};
  std::vector<std::size_t> mc_sizes{200};
  std::vector<std::string> mc_estimators{"irdd"};
  std::vector<double> mc_c{1.0};
  bool mc_hetero = false, mc_coverage = false;
  irdd::mc::McSettings mc_ms;
  irdd::mc::CoverageSettings mc_cs;
  std::uint64_t mc_seed = 0;
  std::string mc_output;
  mc->add_option("--dgp", mc_dgps, "design ids (1..8)");
  mc->add_option("--n", mc_sizes, "sample sizes");
  mc->add_option("--estimators", mc_estimators,
                 "irdd, irdd-mse, knn, local-linear (bias table only)");
  mc->add_flag("--hetero", mc_hetero, "heteroskedastic noise sqrt(x+1)");
  mc->add_option("--reps", mc_ms.reps, "Monte Carlo replications");
  mc->add_option("--c", mc_c, "offset scales (coverage table varies c)");
  mc->add_option("--a", mc_ms.a, "offset exponent for the bias table");
  mc->add_flag("--coverage", mc_coverage, "bootstrap coverage/length table");
  mc->add_option("--boot-reps", mc_cs.boot_reps, "bootstrap replicates per interval");
  mc->add_option("--level", mc_cs.level, "nominal confidence level");
  mc->add_option("--seed", mc_seed, "RNG seed (required)")->required();
  mc->add_option("--output", mc_output, "output path (default stdout)");

  // limit
  auto* limit = app.add_subcommand("limit", "draws from the limiting distributions");
  std::string lim_regime = "chernoff", lim_format = "csv", lim_output;
  std::size_t lim_reps = 1000;
  std::uint64_t lim_seed = 0;
  irdd::limits::LimitSpec lim_plus, lim_minus;
  irdd::limits::ProcessGrid lim_grid = irdd::limits::boundary_grid();
  limit->add_option("--regime", lim_regime)
      ->check(CLI::IsMember({"chernoff", "interior", "boundary-third", "boundary-fast",
                             "sharp"}));
  limit->add_option("--reps", lim_reps, "number of draws");
  limit->add_option("--sigma2", lim_plus.sigma2, "noise variance at the boundary");
  limit->add_option("--density", lim_plus.density, "running-variable density");
  limit->add_option("--slope", lim_plus.slope, "regression slope (plus side)");
  limit->add_option("--slope-minus", lim_minus.slope, "regression slope (minus side)");
  limit->add_option("--c", lim_plus.c, "offset scale");
  limit->add_option("--dt", lim_grid.dt, "Euler step");
  limit->add_option("--horizon", lim_grid.horizon, "path horizon");
  limit->add_option("--format", lim_format)->check(CLI::IsMember({"csv", "json"}));
  limit->add_option("--seed", lim_seed, "RNG seed (required)")->required();
  limit->add_option("--output", lim_output, "output path (default stdout)");

  // cstar
  auto* cstar = app.add_subcommand("cstar", "MSE-optimal offset constant estimate");
  std::size_t cs_reps = 100000;
  std::uint64_t cs_seed = 0;
  double cs_min = 0.05, cs_max = 1.0, cs_step = 0.01;
  irdd::limits::ProcessGrid cs_grid = irdd::limits::chernoff_grid();
  std::string cs_output;
  cstar->add_option("--reps", cs_reps, "number of paths");
  cstar->add_option("--c-min", cs_min);
  cstar->add_option("--c-max", cs_max);
  cstar->add_option("--c-step", cs_step);
  cstar->add_option("--dt", cs_grid.dt, "Euler step");
  cstar->add_option("--horizon", cs_grid.horizon, "path horizon");
  cstar->add_option("--seed", cs_seed, "RNG seed (required)")->required();
  cstar->add_option("--output", cs_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) return run_fit(fit_csv, fit_decreasing, fit_format, fit_output);

    if (*rdd) {
      if (rdd_fuzzy && rdd_csv.d_col.empty())
        throw config_error("--fuzzy requires --d-col");
      rdd_cfg.offsets = parse_offsets(rdd_offsets);
      return run_rdd(rdd_csv, rdd_cfg, rdd_fuzzy, rdd_method, rdd_k, rdd_bw, rdd_offsets,
                     rdd_output);
    }

    if (*ci) {
      ci_cfg.multiplier = parse_multiplier(ci_mult);
      ci_cfg.flavor = ci_flavor == "recenter" ? irdd::boot::CiFlavor::recenter
                                              : irdd::boot::CiFlavor::percentile;
      ci_cfg.offsets = parse_offsets(ci_offsets);
      ci_cfg.seed = ci_seed;
      return run_ci(ci_csv, ci_cfg, ci_fuzzy, ci_mult, ci_flavor, ci_offsets, ci_output);
    }

    if (*mc) {
      mc_ms.seed = mc_seed;
      mc_cs.seed = mc_seed;
      mc_cs.reps = mc_ms.reps;
      if (!mc_coverage && mc_c.size() == 1) mc_ms.c = mc_c[0];
      if (!mc_coverage && mc_c.size() > 1)
        throw config_error("the bias table takes a single --c; --coverage varies it");
      json echo = config_echo({{"command", "mc"},
                               {"dgp", mc_dgps},
                               {"n", mc_sizes},
                               {"estimators", mc_estimators},
                               {"hetero", mc_hetero},
                               {"coverage", mc_coverage},
                               {"reps", mc_ms.reps},
                               {"c", mc_c},
                               {"a", mc_ms.a},
                               {"boot_reps", mc_cs.boot_reps},
                               {"level", mc_cs.level},
                               {"seed", mc_seed}});
      return run_mc(mc_dgps, mc_sizes, mc_estimators, mc_hetero, mc_coverage, mc_c, mc_ms,
                    mc_cs, mc_output, echo);
    }

    if (*limit) {
      irdd::limits::Regime reg = irdd::limits::Regime::boundary_third;
      if (lim_regime == "interior") reg = irdd::limits::Regime::interior_chernoff;
      if (lim_regime == "boundary-fast") reg = irdd::limits::Regime::boundary_fast;
      lim_plus.regime = reg;
      lim_minus.regime = reg;
      lim_minus.sigma2 = lim_plus.sigma2;
      lim_minus.density = lim_plus.density;
      lim_minus.c = lim_plus.c;
      json echo = config_echo({{"command", "limit"},
                               {"regime", lim_regime},
                               {"reps", lim_reps},
                               {"sigma2", lim_plus.sigma2},
                               {"density", lim_plus.density},
                               {"slope", lim_plus.slope},
                               {"slope_minus", lim_minus.slope},
                               {"c", lim_plus.c},
                               {"dt", lim_grid.dt},
                               {"horizon", lim_grid.horizon},
                               {"seed", lim_seed}});
      return run_limit(lim_regime, lim_reps, lim_seed, lim_plus, lim_minus, lim_grid,
                       lim_format, lim_output, echo);
    }

    if (*cstar) {
      json echo = config_echo({{"command", "cstar"},
                               {"reps", cs_reps},
                               {"c_min", cs_min},
                               {"c_max", cs_max},
                               {"c_step", cs_step},
                               {"dt", cs_grid.dt},
                               {"horizon", cs_grid.horizon},
                               {"seed", cs_seed}});
      return run_cstar(cs_reps, cs_seed, cs_min, cs_max, cs_step, cs_grid, cs_output, echo);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 3;
  } catch (const irdd::insufficient_data_error& e) {
    std::fprintf(stderr, "estimation error: %s (n_left=%zu, n_right=%zu)\n", e.what(),
                 e.n_left, e.n_right);
    return 5;
  } catch (const irdd::weak_discontinuity_error& e) {
    std::fprintf(stderr, "estimation error: %s (p_minus=%g, p_plus=%g)\n", e.what(),
                 e.p_minus, e.p_plus);
    return 5;
  } catch (const irdd::degenerate_window_error& e) {
    std::fprintf(stderr, "estimation error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 4;
  }
  return 0;
}
