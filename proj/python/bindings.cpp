#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hallmhd/lpbox.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/oracle3d.hpp"
#include "hallmhd/run.hpp"

namespace py = pybind11;
using namespace hallmhd;

namespace {

py::array_t<double> to_array(const ScalarField& f) {
  const GridSpec& g = f.grid();
  py::array_t<double> a({g.nr, g.nz});
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

py::dict state_dict(const State& s) {
  py::dict d;
  d["t"] = s.t;
  d["formulation"] = to_string(s.formulation);
  d["nr"] = s.grid().nr;
  d["nz"] = s.grid().nz;
  d["R"] = s.grid().R;
  d["Lz"] = s.grid().Lz;
  d["omega"] = to_array(s.omega);
  d["b"] = to_array(s.b);
  return d;
}

// Column-wise: one numpy array per diagnostics column.
py::dict records_dict(const std::vector<DiagRecord>& records) {
  py::dict d;
  for (const auto& c : diag_columns()) {
    py::array_t<double> a(static_cast<py::ssize_t>(records.size()));
    for (std::size_t k = 0; k < records.size(); ++k) a.mutable_at(k) = records[k].*(c.member);
    d[c.name] = a;
  }
  return d;
}

std::vector<DiagRecord> records_from(const py::dict& d) {
  std::vector<DiagRecord> out;
  for (const auto& c : diag_columns()) {
    if (!d.contains(c.name)) throw py::key_error(std::string("missing column ") + c.name);
    const auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(d[c.name]);
    if (!a || a.ndim() != 1) throw py::value_error(std::string("column ") + c.name + " must be 1-D");
    if (out.empty()) out.resize(static_cast<std::size_t>(a.size()));
    if (static_cast<std::size_t>(a.size()) != out.size()) throw py::value_error("columns differ in length");
    for (std::size_t k = 0; k < out.size(); ++k) out[k].*(c.member) = a.at(k);
  }
  return out;
}

RunConfig as_config(const py::object& o) {
  if (py::isinstance<RunConfig>(o)) return o.cast<RunConfig>();
  return parse_config(o.cast<std::string>());
}

py::dict identity_dict(const oracle::IdentityReport& r) {
  py::dict d;
  d["sizes"] = r.sizes;
  d["errors"] = r.errors;
  d["order"] = r.order;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hallmhd, m) {
  m.doc() = "Axisymmetric Hall-MHD simulator and verification harness";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("nr", &RunConfig::nr)
      .def_readwrite("nz", &RunConfig::nz)
      .def_readwrite("R", &RunConfig::R)
      .def_readwrite("Lz", &RunConfig::Lz)
      .def_readwrite("T", &RunConfig::T)
      .def_readwrite("dt_out", &RunConfig::dt_out)
      .def_readwrite("sigma", &RunConfig::sigma)
      .def_readwrite("diagnostics", &RunConfig::diagnostics)
      .def_readwrite("snapshot", &RunConfig::snapshot)
      .def_readwrite("snapshot_every", &RunConfig::snapshot_every)
      .def_property_readonly("formulation", [](const RunConfig& c) { return to_string(c.formulation); })
      .def_property_readonly("advection", [](const RunConfig& c) { return to_string(c.step.advection); })
      .def_property_readonly("hall_flux", [](const RunConfig& c) { return to_string(c.step.hall_flux); })
      .def("validate", [](const RunConfig& c) { validate(c); })
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; })
      .def("__str__", &serialize_config)
      .def("__repr__", [](const RunConfig& c) {
        return "RunConfig(nr=" + std::to_string(c.nr) + ", nz=" + std::to_string(c.nz) + ", T=" + std::to_string(c.T) +
               ")";
      });

  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("serialize_config", &serialize_config, py::arg("config"));
  m.def("config_keys", &config_keys);
  m.def("diag_columns", [] {
    std::vector<std::string> names;
    for (const auto& c : diag_columns()) names.emplace_back(c.name);
    return names;
  });

  m.def("initial_state", [](const py::object& cfg) { return state_dict(initial_state(as_config(cfg))); },
        py::arg("config"), "Initial (omega, b) arrays of shape (nr, nz) in the configured formulation.");

  m.def(
      "run",
      [](const py::object& cfg_obj, bool trace, bool write_outputs) {
        const RunConfig cfg = as_config(cfg_obj);
        RunOptions o;
        o.trace = trace;
        o.write_outputs = write_outputs;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(cfg, o);
        }
        py::dict d = state_dict(r.state);
        d["steps"] = r.steps;
        d["records"] = records_dict(r.records);
        if (trace) {
          py::dict t;
          for (auto [name, member] : {std::pair{"t", &StepTrace::t}, {"dt", &StepTrace::dt}, {"div_rel", &StepTrace::div_rel},
                                      {"pi_l2", &StepTrace::pi_l2}, {"pi_l4", &StepTrace::pi_l4},
                                      {"pi_l8", &StepTrace::pi_l8}, {"pi_inf", &StepTrace::pi_inf}}) {
            std::vector<double> col;
            for (const auto& s : r.trace) col.push_back(s.*member);
            t[name] = py::array_t<double>(static_cast<py::ssize_t>(col.size()), col.data());
          }
          d["trace"] = t;
        }
        return d;
      },
      py::arg("config"), py::arg("trace") = false, py::arg("write_outputs") = false,
      "Integrate a configuration (a RunConfig or config text).");

  m.def(
      "verify",
      [](const py::object& cfg_obj) {
        const RunConfig cfg = as_config(cfg_obj);
        VerifyReport rep;
        {
          py::gil_scoped_release release;
          RunOptions o;
          o.trace = true;
          o.write_outputs = false;
          rep = verify_run(cfg, run_simulation(cfg, o));
        }
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["tolerance"] = c.tolerance;
          d["t"] = c.t;
          d["passed"] = c.passed;
          d["skipped"] = c.skipped;
          checks.append(d);
        }
        py::dict out;
        out["passed"] = rep.passed();
        out["checks"] = checks;
        return out;
      },
      py::arg("config"));

  m.def("read_diagnostics", [](const std::string& path) { return records_dict(read_diagnostics(path)); },
        py::arg("path"));
  m.def(
      "write_diagnostics",
      [](const py::dict& records, const std::string& path, const std::string& echo) {
        write_diagnostics(records_from(records), path, echo);
      },
      py::arg("records"), py::arg("path"), py::arg("config_echo") = "");
  m.def(
      "read_snapshot",
      [](const std::string& path) {
        const Snapshot s = read_snapshot(path);
        py::dict d = state_dict(s.state);
        d["config"] = s.config_echo;
        return d;
      },
      py::arg("path"));

  m.def(
      "mms",
      [](const std::vector<int>& sizes) {
        MmsOptions o;
        o.sizes = sizes;
        const MmsReport rep = run_mms(o);
        py::dict series;
        for (const auto& s : rep.series) {
          py::dict d;
          d["sizes"] = s.sizes;
          d["errors"] = s.errors;
          d["order"] = s.order;
          series[s.name.c_str()] = d;
        }
        py::dict out;
        out["series"] = series;
        out["r_sensitivity"] = rep.r_sensitivity;
        out["passed"] = rep.passed();
        return out;
      },
      py::arg("sizes") = std::vector<int>{64, 128, 256});

  m.def(
      "oracle_battery",
      [](const std::vector<int>& sizes) {
        oracle::OracleSetup setup;
        setup.sizes = sizes;
        const auto b = oracle::run_oracle_battery(setup);
        py::dict out;
        out["hall"] = identity_dict(b.hall);
        out["vorticity"] = identity_dict(b.vorticity);
        out["norm_l2"] = identity_dict(b.norms.l2);
        out["norm_h1"] = identity_dict(b.norms.h1);
        out["passed"] = b.passed();
        return out;
      },
      py::arg("sizes") = std::vector<int>{64, 128});

  m.def(
      "lp_battery",
      [](int n, int samples, std::uint64_t seed) {
        lp::LpBatteryOptions o;
        o.n = n;
        o.samples = samples;
        o.seed = seed;
        const auto rep = lp::run_lp_battery(o);
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict d;
          d["name"] = c.name;
          d["c_star"] = c.c_star;
          d["min_ratio"] = c.sweep.min_ratio;
          d["max_ratio"] = c.sweep.max_ratio;
          d["violations"] = c.sweep.violations;
          d["samples"] = c.sweep.samples;
          checks.append(d);
        }
        py::dict out;
        out["partition_residual"] = rep.partition_residual;
        out["reconstruction_residual"] = rep.reconstruction_residual;
        out["checks"] = checks;
        out["passed"] = rep.passed();
        return out;
      },
      py::arg("n") = 32, py::arg("samples") = 20, py::arg("seed") = 1);
}
