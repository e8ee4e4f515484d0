// Python bindings for the main operations: model construction, dispersion
// constants, the scalar reduction, steady states, traveling waves, and
// front-speed measurement. Results cross the boundary as plain dicts and
// lists so the package has no binary API of its own.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>

#include "agewave/cauchy.hpp"
#include "agewave/errors.hpp"
#include "agewave/model.hpp"
#include "agewave/spectral.hpp"
#include "agewave/spreading.hpp"
#include "agewave/waves.hpp"

namespace py = pybind11;
using namespace agewave;

namespace {

py::dict dispersion_dict(const DispersionReport& rep) {
  py::dict d;
  d["s0"] = rep.s0;
  d["rho_at_zero"] = rep.rho_at_zero;
  d["c_star"] = rep.c_star;
  d["lambda_star"] = rep.lambda_star;
  d["eigen_residual"] = rep.eigen_residual;
  d["min_phi"] = rep.min_phi;
  d["max_phi"] = rep.max_phi;
  d["phi"] = rep.phi;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "age-structured wave and spreading solvers";

  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_RuntimeError);
  py::register_exception<IoError>(mod, "IoError", PyExc_OSError);

  py::class_<ModelSpec, std::shared_ptr<ModelSpec>>(mod, "Model")
      .def_property_readonly("n_a", [](const ModelSpec& m) { return m.age.n; })
      .def_property_readonly("a_max", [](const ModelSpec& m) { return m.age.a_max; })
      .def_property_readonly("M", [](const ModelSpec& m) { return m.M; })
      .def("__repr__", [](const ModelSpec& m) {
        return "<Model n_a=" + std::to_string(m.age.n) +
               " a_max=" + std::to_string(m.age.a_max) + ">";
      });

  mod.def(
      "reference_model",
      [](int n_a, double kappa, double sigma, double a_max) {
        return std::make_shared<ModelSpec>(
            make_reference_model(n_a, kappa, sigma, a_max));
      },
      py::arg("n_a") = 101, py::arg("kappa") = 1.0, py::arg("sigma") = 1.0,
      py::arg("a_max") = 1.0,
      "Reference model: zero mortality, uniform births, constant "
      "transmission kappa, gaussian dispersal.");

  mod.def(
      "validate",
      [](const ModelSpec& m) {
        py::list items;
        for (const auto& item : validate_assumptions(m).items) {
          py::dict d;
          d["name"] = item.name;
          d["pass"] = item.pass;
          d["measured"] = item.measured;
          d["detail"] = item.detail;
          items.append(d);
        }
        return items;
      },
      py::arg("model"), "Standing-assumption checks, one dict per item.");

  mod.def(
      "dispersion",
      [](const ModelSpec& m) { return dispersion_dict(dispersion_report(m)); },
      py::arg("model"),
      "Growth bound s0, critical speed, tangency decay rate, eigenprofile.");

  mod.def(
      "kpp",
      [](const ModelSpec& m) {
        KppReference k = kpp_reference(m, dispersion_report(m));
        py::dict d;
        d["lambda0"] = k.lambda0;
        d["phi_min"] = k.phi_min;
        d["P"] = k.P;
        d["c0"] = k.c0;
        d["lambda_min"] = k.lambda_min;
        d["rho0"] = k.rho0;
        return d;
      },
      py::arg("model"),
      "Constants of the scalar comparison equation and its spreading speed.");

  mod.def(
      "steady_levels",
      [](const ModelSpec& m, int n_guesses) {
        SteadyScanResult scan = steady_state_scan(m, n_guesses);
        py::list levels;
        for (const auto& eq : scan.equilibria) {
          double lo = eq.profile[0], hi = eq.profile[0];
          for (double v : eq.profile) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          levels.append(0.5 * (lo + hi));
        }
        return levels;
      },
      py::arg("model"), py::arg("n_guesses") = 9,
      "Levels of the equilibria found by the constant-guess scan.");

  mod.def(
      "wave",
      [](const ModelSpec& m, double c, double half_width, int n_xi, double tol,
         int max_iter) {
        DispersionReport rep = dispersion_report(m);
        SpaceGrid grid{half_width, n_xi};
        SubSuperPair pair = select_sub_parameters(m, rep, c, grid);
        WaveProfile profile = monotone_iterate(m, pair, grid, tol, max_iter);
        EdgeReport edges = edge_limits(profile, m);
        py::dict d;
        d["c"] = profile.c;
        d["lambda"] = profile.lambda;
        d["iterations"] = profile.iterations;
        d["residual"] = profile.residual;
        d["last_increment"] = profile.last_increment;
        d["sandwich_low"] = profile.sandwich_low;
        d["sandwich_high"] = profile.sandwich_high;
        d["mono_margin"] = profile.mono_margin;
        d["lipschitz_m"] = profile.lipschitz_m;
        d["edges_ok"] = edges.ok();
        d["n_a"] = profile.age.n;
        d["n_xi"] = profile.xi.n;
        d["w"] = profile.w;
        return d;
      },
      py::arg("model"), py::arg("c"), py::arg("half_width") = 30.0,
      py::arg("n_xi") = 1201, py::arg("tol") = 1e-8, py::arg("max_iter") = 2000,
      "Monotone-iteration traveling wave at speed c with its diagnostics; "
      "w is the row-major n_a x n_xi profile.");

  mod.def(
      "spread_speed",
      [](const ModelSpec& m, double half_width, int n_x, double T, double rho,
         double skip_frac, int n_snapshots) {
        SpaceGrid grid{half_width, n_x};
        Field u0 = make_field(m, grid, [](double, double x) {
          return std::abs(x) <= 1.0 ? 1.0 : 0.0;
        });
        CauchySimulator sim(m, grid, SpaceClosure::zero);
        std::vector<double> snaps;
        for (int k = 0; k <= n_snapshots; ++k)
          snaps.push_back(T * k / n_snapshots);
        Trajectory traj = sim.run(u0, T, snaps);
        SpeedEstimate est = estimate_speed(track_front(traj, rho), skip_frac);
        py::dict d;
        d["c_right"] = est.c_right;
        d["c_left"] = est.c_left;
        d["stderr_right"] = est.stderr_right;
        d["asymmetry"] = est.asymmetry;
        d["points"] = est.points;
        return d;
      },
      py::arg("model"), py::arg("half_width"), py::arg("n_x"), py::arg("T"),
      py::arg("rho") = 0.5, py::arg("skip_frac") = 0.4,
      py::arg("n_snapshots") = 40,
      "Front speed of a box seed under the full evolution, measured on the "
      "late-time window.");
}
