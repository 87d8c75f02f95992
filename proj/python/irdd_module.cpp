// Python bindings for the main operations: isotonic fit, discontinuity
// estimates, the trimmed wild-bootstrap interval, the Monte Carlo tables and
// the limit-law simulators.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
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

namespace py = pybind11;

namespace {

irdd::Sample make_sample(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<int>& d) {
  irdd::Sample s;
  s.x = x;
  s.y = y;
  s.d.reserve(d.size());
  for (int v : d) {
    if (v != 0 && v != 1) throw std::invalid_argument("d entries must be 0 or 1");
    s.d.push_back(static_cast<std::uint8_t>(v));
  }
  s.validate();
  return s;
}

irdd::OffsetConvention offsets_from(const std::string& s) {
  if (s == "per-side") return irdd::OffsetConvention::per_side;
  if (s == "pooled") return irdd::OffsetConvention::pooled;
  throw std::invalid_argument("offsets must be 'per-side' or 'pooled'");
}

irdd::boot::Multiplier multiplier_from(const std::string& s) {
  if (s == "rademacher") return irdd::boot::Multiplier::rademacher;
  if (s == "gaussian") return irdd::boot::Multiplier::gaussian;
  if (s == "mammen") return irdd::boot::Multiplier::mammen;
  throw std::invalid_argument("multiplier must be 'rademacher', 'gaussian' or 'mammen'");
}

py::dict estimate_dict(const irdd::RddEstimate& e) {
  py::dict d;
  d["theta"] = e.theta;
  d["m_minus"] = e.m_minus;
  d["m_plus"] = e.m_plus;
  d["naive_theta"] = e.naive_theta ? py::cast(*e.naive_theta) : py::none();
  d["p_minus"] = e.p_minus ? py::cast(*e.p_minus) : py::none();
  d["p_plus"] = e.p_plus ? py::cast(*e.p_plus) : py::none();
  d["eval_minus"] = e.eval_minus;
  d["eval_plus"] = e.eval_plus;
  d["n_minus"] = e.n_minus;
  d["n_plus"] = e.n_plus;
  d["clamped_minus"] = e.clamped_minus;
  d["clamped_plus"] = e.clamped_plus;
  return d;
}

irdd::RddConfig rdd_config(double cutoff, double c, double a, const std::string& offsets) {
  irdd::RddConfig cfg;
  cfg.cutoff = cutoff;
  cfg.c = c;
  cfg.a = a;
  cfg.offsets = offsets_from(offsets);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_irdd, m) {
  m.doc() = "isotonic regression discontinuity estimators";

  py::register_exception<irdd::insufficient_data_error>(m, "InsufficientDataError");
  py::register_exception<irdd::weak_discontinuity_error>(m, "WeakDiscontinuityError");
  py::register_exception<irdd::degenerate_window_error>(m, "DegenerateWindowError");

  m.def(
      "fit",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        irdd::StepFit f = irdd::pava_fit(make_sample(x, y, {}));
        return py::make_tuple(f.knots, f.values);
      },
      py::arg("x"), py::arg("y"),
      "Non-decreasing least-squares fit; returns (knots, values).");

  m.def(
      "eval_fit",
      [](const std::vector<double>& knots, const std::vector<double>& values, double at) {
        irdd::StepFit f;
        f.knots = knots;
        f.values = values;
        return irdd::eval_step(f, at);
      },
      py::arg("knots"), py::arg("values"), py::arg("at"),
      "Left-continuous step evaluation with clamping.");

  m.def(
      "sharp_estimate",
      [](const std::vector<double>& x, const std::vector<double>& y, double cutoff,
         double c, double a, const std::string& offsets) {
        return estimate_dict(
            irdd::sharp_estimate(make_sample(x, y, {}), rdd_config(cutoff, c, a, offsets)));
      },
      py::arg("x"), py::arg("y"), py::arg("cutoff") = 0.0, py::arg("c") = 1.0,
      py::arg("a") = 1.0 / 3.0, py::arg("offsets") = "per-side");

  m.def(
      "fuzzy_estimate",
      [](const std::vector<double>& x, const std::vector<double>& y,
         const std::vector<int>& d, double cutoff, double c, double a,
         const std::string& offsets) {
        return estimate_dict(
            irdd::fuzzy_estimate(make_sample(x, y, d), rdd_config(cutoff, c, a, offsets)));
      },
      py::arg("x"), py::arg("y"), py::arg("d"), py::arg("cutoff") = 0.0, py::arg("c") = 1.0,
      py::arg("a") = 1.0 / 3.0, py::arg("offsets") = "per-side");

  m.def(
      "sharp_wild_ci",
      [](const std::vector<double>& x, const std::vector<double>& y, double cutoff,
         double c, std::size_t reps, double level, const std::string& multiplier,
         std::uint64_t seed, const std::string& offsets) {
        irdd::boot::BootstrapConfig cfg;
        cfg.cutoff = cutoff;
        cfg.c = c;
        cfg.reps = reps;
        cfg.level = level;
        cfg.multiplier = multiplier_from(multiplier);
        cfg.seed = seed;
        cfg.offsets = offsets_from(offsets);
        irdd::boot::BootstrapReport r = irdd::boot::sharp_wild_ci(make_sample(x, y, {}), cfg);
        py::dict d;
        d["point"] = r.point;
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["level"] = r.level;
        d["reps"] = r.reps;
        d["low_reps_warning"] = r.low_reps_warning;
        d["replicates"] = r.replicates;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("cutoff") = 0.0, py::arg("c") = 1.0,
      py::arg("reps") = 999, py::arg("level") = 0.95, py::arg("multiplier") = "rademacher",
      py::arg("seed") = 0, py::arg("offsets") = "per-side");

  m.def(
      "baseline_estimate",
      [](const std::vector<double>& x, const std::vector<double>& y, double cutoff,
         const std::string& method, std::size_t k, double bandwidth) {
        irdd::baselines::BaselineConfig cfg;
        if (method == "knn")
          cfg.method = irdd::baselines::BaselineMethod::knn;
        else if (method == "local-linear")
          cfg.method = irdd::baselines::BaselineMethod::local_linear;
        else
          throw std::invalid_argument("method must be 'knn' or 'local-linear'");
        cfg.k = k;
        cfg.bandwidth = bandwidth;
        return estimate_dict(
            irdd::baselines::sharp_baseline_estimate(make_sample(x, y, {}), cutoff, cfg));
      },
      py::arg("x"), py::arg("y"), py::arg("cutoff") = 0.0, py::arg("method") = "knn",
      py::arg("k") = 0, py::arg("bandwidth") = 0.0);

  m.def(
      "dgp_sample",
      [](int id, std::size_t n, std::uint64_t seed, bool hetero) {
        irdd::mc::DgpSpec spec = irdd::mc::dgp(
            id, hetero ? irdd::mc::Noise::heteroskedastic : irdd::mc::Noise::homoskedastic);
        auto rng = irdd::make_engine(seed, 0);
        irdd::Sample s = irdd::mc::dgp_sample(spec, n, rng);
        std::vector<int> d(s.d.begin(), s.d.end());
        return py::make_tuple(s.x, s.y, d);
      },
      py::arg("id"), py::arg("n"), py::arg("seed"), py::arg("hetero") = false);

  m.def(
      "mc_table",
      [](const std::vector<int>& dgps, const std::vector<std::size_t>& sizes,
         const std::vector<std::string>& estimators, std::size_t reps, std::uint64_t seed,
         double c, double a, bool hetero) {
        irdd::mc::Noise noise = hetero ? irdd::mc::Noise::heteroskedastic
                                       : irdd::mc::Noise::homoskedastic;
        std::vector<irdd::mc::DgpSpec> specs;
        for (int id : dgps) specs.push_back(irdd::mc::dgp(id, noise));
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
            throw std::invalid_argument("unknown estimator '" + e + "'");
        }
        irdd::mc::McSettings ms;
        ms.reps = reps;
        ms.seed = seed;
        ms.c = c;
        ms.a = a;
        irdd::mc::McReport rep = irdd::mc::mc_table(specs, sizes, ests, ms);
        py::list rows;
        for (const irdd::mc::McRow& r : rep.rows) {
          py::dict d;
          d["dgp"] = r.dgp;
          d["noise"] = irdd::io::noise_name(r.noise);
          d["n"] = r.n;
          d["estimator"] = irdd::io::estimator_name(r.est);
          d["bias"] = r.bias;
          d["variance"] = r.variance;
          d["mse"] = r.mse;
          d["reps"] = r.reps;
          d["skips"] = r.skips;
          rows.append(d);
        }
        return rows;
      },
      py::arg("dgps"), py::arg("sizes"), py::arg("estimators"), py::arg("reps") = 1000,
      py::arg("seed") = 1, py::arg("c") = 1.0, py::arg("a") = 1.0 / 3.0,
      py::arg("hetero") = false);

  m.def(
      "chernoff_draw",
      [](std::uint64_t seed, double dt, double horizon) {
        return irdd::limits::chernoff_draw(seed, {dt, horizon});
      },
      py::arg("seed"), py::arg("dt") = 1e-3, py::arg("horizon") = 3.0,
      "One draw of argmax_t (W_t - t^2).");

  m.def(
      "estimate_cstar",
      [](std::size_t reps, std::uint64_t seed, double dt, double horizon, double c_min,
         double c_max, double c_step) {
        irdd::limits::CStarCurve curve =
            irdd::limits::estimate_cstar(reps, seed, {dt, horizon}, c_min, c_max, c_step);
        py::dict d;
        d["c_star"] = curve.c_star;
        d["c"] = curve.c;
        d["objective"] = curve.objective;
        return d;
      },
      py::arg("reps"), py::arg("seed"), py::arg("dt") = 1e-3, py::arg("horizon") = 3.0,
      py::arg("c_min") = 0.05, py::arg("c_max") = 1.0, py::arg("c_step") = 0.01);
}
