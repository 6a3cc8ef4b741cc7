#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polystate/audit.hpp"
#include "polystate/cli.hpp"
#include "polystate/engine.hpp"
#include "polystate/ensemble.hpp"
#include "polystate/errors.hpp"
#include "polystate/scenario.hpp"
#include "polystate/spacetime.hpp"

namespace py = pybind11;
using namespace polystate;

namespace {

spacetime::Event to_event(const std::vector<double>& coords) { return spacetime::Event(coords); }

}  // namespace

PYBIND11_MODULE(_polystate, m) {
  m.doc() = "Polystate simulator core";

  py::register_exception<Error>(m, "PolystateError");

  py::class_<scenario::Scenario>(m, "Scenario")
      .def_property_readonly("n", &scenario::Scenario::n)
      .def_property_readonly("names",
                             [](const scenario::Scenario& s) {
                               std::vector<std::string> out;
                               for (const auto& sub : s.subsystems) out.push_back(sub.name);
                               return out;
                             })
      .def_property_readonly("dims", &scenario::Scenario::dims)
      .def_property_readonly("initial_state",
                             [](const scenario::Scenario& s) { return s.initial_state.matrix(); })
      .def("serialize", &scenario::serialize);

  m.def("parse_scenario", [](const std::string& text) { return scenario::parse_scenario(text); });
  m.def("load_scenario", [](const std::string& path) { return scenario::load_scenario(path); });

  py::class_<engine::Engine>(m, "Engine")
      .def(py::init([](const scenario::Scenario& s) { return engine::Engine(s); }))
      .def("sector",
           [](const engine::Engine& e, const engine::Taus& taus, const engine::Subset& subset) {
             return e.sector(taus, subset).matrix();
           })
      .def("polystate",
           [](const engine::Engine& e, const engine::Taus& taus) {
             py::dict out;
             for (const auto& [subset, rho] : e.polystate_at(taus).sectors) {
               out[py::tuple(py::cast(subset))] = rho.matrix();
             }
             return out;
           })
      .def("observer_state",
           [](const engine::Engine& e, const std::vector<double>& x) { return e.observer_state(to_event(x)).matrix(); })
      .def("foliation_state",
           [](const engine::Engine& e, const std::vector<double>& v, double t) {
             return e.foliation_state(spacetime::Foliation(v), t).matrix();
           })
      .def("position",
           [](const engine::Engine& e, std::size_t i, double tau) {
             return e.scenario().subsystems.at(i).worldline.position(tau).coords();
           })
      .def("crossings", [](const engine::Engine& e, std::size_t i, const std::vector<double>& apex) {
        const auto c = spacetime::lightcone_crossings(e.scenario().subsystems.at(i).worldline, to_event(apex));
        return std::make_pair(c.tau_minus, c.tau_plus);
      });

  m.def("enumerate_branches", [](const scenario::Scenario& s) {
    py::list out;
    for (const auto& b : ensemble::enumerate_branches(s)) {
      py::dict d;
      d["outcomes"] = b.outcomes;
      d["probability"] = b.probability;
      if (b.final_state) d["final_state"] = b.final_state->matrix();
      out.append(d);
    }
    return out;
  });

  m.def("sample_outcomes", [](const scenario::Scenario& s, std::size_t n, std::uint64_t seed) {
    return ensemble::sample_runs(s, n, seed).outcomes;
  });

  m.def("criteria", [](const engine::Engine& e, const engine::Taus& taus) {
    const auto r = audit::criteria_report(e, taus);
    py::dict out;
    out["targets"] = r.targets;
    for (const auto& row : r.rows) {
      py::dict d;
      d["values"] = row.values;
      d["predictive"] = row.predictive;
      d["respects_ignorance"] = row.respects_ignorance;
      d["all_pass"] = row.all_pass();
      out[py::str(row.prescription.name())] = d;
    }
    return out;
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
