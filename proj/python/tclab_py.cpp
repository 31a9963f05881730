#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "tclab/errors.hpp"
#include "tclab/experiment.hpp"
#include "tclab/intensity.hpp"
#include "tclab/limitproc.hpp"
#include "tclab/localtime.hpp"
#include "tclab/parallel.hpp"
#include "tclab/stats.hpp"
#include "tclab/stochcalc.hpp"
#include "tclab/timechange.hpp"

namespace py = pybind11;
using namespace tclab;

namespace {

Path make_path(std::vector<double> values, double dt, PathKind kind = PathKind::Brownian) {
  Path p;
  p.dt = dt;
  p.values = std::move(values);
  p.kind = kind;
  return p;
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["times"] = t.times;
  d["values"] = t.values;
  return d;
}

py::dict report_dict(const ConvergenceReport& r) {
  py::list cells;
  for (const auto& c : r.cells) {
    py::dict d;
    d["n"] = c.n;
    d["t"] = c.t;
    d["observable"] = c.label();
    d["ks"] = c.ks;
    d["threshold"] = c.threshold;
    d["verdict"] = std::string(to_string(c.verdict));
    cells.append(d);
  }
  py::list trends;
  for (const auto& t : r.trends) {
    py::dict d;
    d["observable"] = t.label;
    d["ks"] = t.ks;
    d["inversions"] = t.inversions;
    d["decreasing"] = t.decreasing;
    trends.append(d);
  }
  py::dict out;
  out["ladder"] = r.ladder;
  out["grid"] = r.grid;
  out["cells"] = cells;
  out["trends"] = trends;
  out["trends_decreasing"] = r.trends_decreasing();
  out["final_cells_pass"] = r.final_cells_pass();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-changed Brownian motion: samplers, limit processes and convergence checks";

  auto base = py::register_exception<Error>(m, "TclabError", PyExc_RuntimeError);
  py::register_exception<NonIntegrableSingularity>(m, "NonIntegrableSingularity", base.ptr());
  py::register_exception<KindMismatch>(m, "KindMismatch", base.ptr());
  py::register_exception<HorizonExceeded>(m, "HorizonExceeded", base.ptr());
  py::register_exception<DegenerateFunctional>(m, "DegenerateFunctional", base.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", base.ptr());
  py::register_exception<RegimeMismatch>(m, "RegimeMismatch", base.ptr());
  py::register_exception<ConfigInvalid>(m, "ConfigInvalid", base.ptr());

  py::enum_<Regime>(m, "Regime")
      .value("POINTWISE", Regime::Pointwise)
      .value("CESARO_DELTA", Regime::CesaroDelta)
      .value("REGULARLY_VARYING", Regime::RegularlyVarying);

  py::class_<IntensityModel>(m, "IntensityModel")
      .def_static("asymptotic_constant", &IntensityModel::asymptotic_constant, py::arg("a_plus"),
                  py::arg("a_minus"))
      .def_static("constant", &IntensityModel::constant, py::arg("c"))
      .def_static("power_tail", &IntensityModel::power_tail, py::arg("delta"), py::arg("a_plus"),
                  py::arg("a_minus"), py::arg("x0") = 1.0, py::arg("regime") = Regime::CesaroDelta)
      .def_static("periodic", &IntensityModel::periodic, py::arg("mean"), py::arg("amplitude"),
                  py::arg("period") = 1.0)
      .def_static("degenerate_at_zero", &degenerate_at_zero, py::arg("base"))
      .def_static("oscillating", &oscillating_sides, py::arg("a_plus"), py::arg("a_minus"), py::arg("eps"))
      .def_static("gaussian_bump", &gaussian_bump, py::arg("height"))
      .def("__call__", &IntensityModel::operator(), py::arg("x"))
      .def("normalization", &IntensityModel::normalization, py::arg("n"))
      .def_property_readonly("name", &IntensityModel::name)
      .def_property_readonly("a_plus", &IntensityModel::a_plus)
      .def_property_readonly("a_minus", &IntensityModel::a_minus)
      .def_property_readonly("regime", &IntensityModel::regime)
      .def_property_readonly("exponent", &IntensityModel::exponent)
      .def("__repr__", [](const IntensityModel& self) { return "<IntensityModel " + self.name() + ">"; });

  m.def("reciprocal_integral",
        [](const IntensityModel& model, double a, double b) { return reciprocal_integral(model, a, b); },
        py::arg("model"), py::arg("a"), py::arg("b"));

  py::enum_<EtaConvention>(m, "EtaConvention")
      .value("EXACT", EtaConvention::Exact)
      .value("PUBLISHED", EtaConvention::Published);

  py::class_<LimitSpec>(m, "LimitSpec")
      .def_static("eta", &LimitSpec::eta, py::arg("a_plus"), py::arg("a_minus"))
      .def_static("eta_delta", &LimitSpec::eta_delta, py::arg("a_plus"), py::arg("a_minus"), py::arg("delta"),
                  py::arg("convention") = EtaConvention::Exact)
      .def_static("eta_gamma", &LimitSpec::eta_gamma, py::arg("a_plus"), py::arg("a_minus"), py::arg("gamma"),
                  py::arg("convention") = EtaConvention::Exact)
      .def_static("for_model", &limit_spec_for, py::arg("model"), py::arg("convention") = EtaConvention::Exact)
      .def_readonly("a_plus", &LimitSpec::a_plus)
      .def_readonly("a_minus", &LimitSpec::a_minus)
      .def_readonly("exponent", &LimitSpec::exponent)
      .def_property_readonly("prefactor", &LimitSpec::prefactor)
      .def_property_readonly("family", [](const LimitSpec& s) { return std::string(to_string(s.family)); });

  m.def("nu", &nu, py::arg("x"), py::arg("spec"));

  m.def(
      "sample_brownian",
      [](std::uint64_t seed, std::uint64_t replicate, double horizon, double dt, double start) {
        return sample_brownian({seed, replicate, 0}, horizon, dt, start).values;
      },
      py::arg("seed"), py::arg("replicate"), py::arg("horizon"), py::arg("dt"), py::arg("start") = 0.0,
      "Brownian path values on the grid k * dt.");

  m.def(
      "additive_functional",
      [](const std::vector<double>& values, double dt, const IntensityModel& model) {
        return additive_functional(make_path(values, dt), model).values();
      },
      py::arg("values"), py::arg("dt"), py::arg("model"),
      "S(t_k) = int_0^{t_k} ds / lambda(B_s) on the path's grid.");

  m.def(
      "time_changed",
      [](std::uint64_t seed, std::uint64_t replicate, const IntensityModel& model, const std::vector<double>& times,
         double dt, double start) {
        const auto tc = simulate_time_changed({seed, replicate, 0}, model, times, dt, start);
        py::dict d = trajectory_dict(tc.observed);
        std::vector<double> tau;
        for (double t : times) tau.push_back(tc.tau(t));
        d["tau"] = tau;
        return d;
      },
      py::arg("seed"), py::arg("replicate"), py::arg("model"), py::arg("times"), py::arg("dt") = 1e-3,
      py::arg("start") = 0.0, "B_{tau_t} and tau_t at the given times.");

  m.def(
      "normalized_process",
      [](std::uint64_t seed, std::uint64_t replicate, const IntensityModel& model, double n,
         const std::vector<double>& times, double dt) {
        return sample_normalized_process({seed, replicate, 0}, model, n, times, dt).values;
      },
      py::arg("seed"), py::arg("replicate"), py::arg("model"), py::arg("n"), py::arg("times"), py::arg("dt") = 1e-4);

  m.def(
      "sample_limit_timechange",
      [](std::uint64_t seed, std::uint64_t replicate, const LimitSpec& spec, const std::vector<double>& times,
         double dt) { return sample_limit_timechange({seed, replicate, 0}, spec, times, dt).values; },
      py::arg("seed"), py::arg("replicate"), py::arg("spec"), py::arg("times"), py::arg("dt") = 1e-4);

  m.def(
      "sample_limit_sde",
      [](std::uint64_t seed, std::uint64_t replicate, double a_plus, double a_minus, const std::vector<double>& times,
         double dt) { return sample_limit_sde({seed, replicate, 0}, a_plus, a_minus, times, dt).values; },
      py::arg("seed"), py::arg("replicate"), py::arg("a_plus"), py::arg("a_minus"), py::arg("times"),
      py::arg("dt") = 1e-4);

  m.def(
      "cauchy_estimate",
      [](const IntensityModel& model, const std::function<double(double)>& f, double t, double x,
         std::size_t replicates, std::uint64_t seed, double dt) {
        // The observable is a Python callable, so replicates run on the calling thread.
        const auto est = cauchy_estimate(model, f, t, x, replicates, {seed, 0, 0}, {.dt = dt, .jobs = 1});
        return py::make_tuple(est.estimate, est.std_error);
      },
      py::arg("model"), py::arg("f"), py::arg("t"), py::arg("x"), py::arg("replicates"), py::arg("seed") = 1,
      py::arg("dt") = 1e-3, "Monte Carlo estimate of E^x f(B_{tau_t}) and its standard error.");

  m.def(
      "occupation_density",
      [](const std::vector<double>& values, double dt, double upto, double bin_width) {
        const auto p = occupation_density(make_path(values, dt), upto, bin_width);
        std::vector<double> centers;
        for (std::size_t j = 0; j < p.masses.size(); ++j) centers.push_back(p.center(j));
        return py::make_tuple(centers, p.masses);
      },
      py::arg("values"), py::arg("dt"), py::arg("upto"), py::arg("bin_width") = 1e-2,
      "Bin centers and occupation masses of a path up to time `upto`.");

  m.def(
      "functional_via_localtime",
      [](const std::vector<double>& values, double dt, double upto, double bin_width, const IntensityModel& model) {
        return functional_via_localtime(occupation_density(make_path(values, dt), upto, bin_width), model);
      },
      py::arg("values"), py::arg("dt"), py::arg("upto"), py::arg("bin_width"), py::arg("model"));

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) { return ks_two_sample(a, b); }, py::arg("a"),
      py::arg("b"));
  m.def("dkw_threshold", &dkw_threshold, py::arg("n_a"), py::arg("n_b"), py::arg("alpha") = 0.01);

  m.def(
      "convergence_report",
      [](const IntensityModel& model, const LimitSpec& spec, const std::vector<double>& ladder,
         const std::vector<double>& grid, std::size_t replicates, std::uint64_t seed, double dt, unsigned jobs) {
        ConvergenceReport r;
        {
          py::gil_scoped_release release;
          r = convergence_report(model, spec, ladder, grid, replicates, seed,
                                 {.dt = dt, .jobs = jobs == 0 ? default_jobs() : jobs});
        }
        return report_dict(r);
      },
      py::arg("model"), py::arg("spec"), py::arg("ladder"), py::arg("grid"), py::arg("replicates"),
      py::arg("seed") = 1, py::arg("dt") = 1e-4, py::arg("jobs") = 0);

  m.def(
      "ito_residual_rms",
      [](const std::string& function, const std::vector<double>& dts, double horizon, std::size_t replicates,
         std::uint64_t seed, double delta) {
        const C1aeFunction fn = function == "square" ? C1aeFunction::square() : C1aeFunction::positive_power(delta);
        if (function != "square" && function != "positive_power") {
          throw py::value_error("function must be 'square' or 'positive_power'");
        }
        return ito_residual_ladder(fn, dts, horizon, replicates, seed, default_jobs()).rms;
      },
      py::arg("function"), py::arg("dts"), py::arg("horizon") = 1.0, py::arg("replicates") = 1000,
      py::arg("seed") = 1, py::arg("delta") = 1.0);

  m.def(
      "integral_gaps",
      [](const IntensityModel& model, const std::vector<double>& ladder, double t, std::size_t replicates,
         std::uint64_t seed, double dt) {
        return integral_convergence_check(model, ladder, t, replicates,
                                          {.dt = dt, .master_seed = seed, .jobs = default_jobs()})
            .median_gaps;
      },
      py::arg("model"), py::arg("ladder"), py::arg("t") = 1.0, py::arg("replicates") = 500, py::arg("seed") = 1,
      py::arg("dt") = 1e-4);

  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : list_presets()) out.emplace_back(p.name, p.summary);
    return out;
  });
  m.def(
      "describe_preset", [](const std::string& name) { return config_to_json_text(preset(name)); }, py::arg("name"));
  m.def(
      "run_report",
      [](const std::string& config_json) {
        const auto config = resolve(config_from_json_text(config_json), {});
        validate(config);
        int code = 0;
        std::string text;
        {
          py::gil_scoped_release release;
          text = run_report_text(config, &code);
        }
        return py::make_tuple(text, code);
      },
      py::arg("config_json"), "Runs a config (JSON text) and returns (report JSON text, exit code).");
}
