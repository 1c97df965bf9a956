#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpshock/config.hpp"
#include "tpshock/fv.hpp"
#include "tpshock/stability.hpp"

namespace py = pybind11;
using namespace tpshock;

namespace {

/// Config-driven pipeline: fit the background, solve the supersonic field
/// and run the subsonic iteration. Returns (solution, report).
std::pair<TimePeriodicTransonicSolution, IterationReport> run_periodic(
    const std::string& config_json) {
  const RunConfig cfg = parse_config(nlohmann::json::parse(config_json));
  const SteadyTransonicSolution bg = fit_background(cfg);
  const ScalingConfig scaling = make_scaling(cfg, bg);
  const BoundaryForcing forcing = make_forcing(cfg);
  const SupersonicPeriodicField sup = solve_supersonic_periodic(
      bg.profile, bg, forcing, {cfg.nt, cfg.nx}, cfg.tol_sonic);
  IterationOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.conv_tol_factor = cfg.conv_tol_factor;
  opts.nt = cfg.nt;
  opts.nx = cfg.nx;
  opts.tol_sonic = cfg.tol_sonic;
  return run_iteration(bg, sup, forcing, scaling, opts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quasi-1D isothermal nozzle flow: steady and time-periodic "
            "transonic shock solvers";

  py::register_exception<Error>(m, "SolverError");

  py::class_<GasState>(m, "GasState")
      .def(py::init<double, double>(), py::arg("rho"), py::arg("u"))
      .def_readwrite("rho", &GasState::rho)
      .def_readwrite("u", &GasState::u)
      .def("__repr__", [](const GasState& s) {
        return "GasState(rho=" + std::to_string(s.rho) +
               ", u=" + std::to_string(s.u) + ")";
      });

  py::class_<RiemannPair>(m, "RiemannPair")
      .def(py::init<double, double>(), py::arg("y1"), py::arg("y2"))
      .def_readwrite("y1", &RiemannPair::y1)
      .def_readwrite("y2", &RiemannPair::y2);

  py::enum_<Regime>(m, "Regime")
      .value("Supersonic", Regime::Supersonic)
      .value("Sonic", Regime::Sonic)
      .value("Subsonic", Regime::Subsonic);

  m.def("to_riemann", &to_riemann);
  m.def("from_riemann", &from_riemann);
  m.def("eigenvalues", &eigenvalues);
  m.def("classify", &classify, py::arg("state"),
        py::arg("tol_sonic") = kTolSonic);

  py::class_<NozzleProfile>(m, "NozzleProfile")
      .def_static("exponential", &NozzleProfile::exponential,
                  py::arg("kappa"), py::arg("length"))
      .def_static("polynomial", &NozzleProfile::polynomial,
                  py::arg("coefficients"), py::arg("length"))
      .def("area", &NozzleProfile::area)
      .def("area_prime", &NozzleProfile::area_prime)
      .def("rel_slope", &NozzleProfile::rel_slope)
      .def("rel_slope_prime", &NozzleProfile::rel_slope_prime)
      .def_property_readonly("length", &NozzleProfile::length);

  py::class_<AssumptionReport>(m, "AssumptionReport")
      .def_readonly("kappa", &AssumptionReport::kappa)
      .def_readonly("theta", &AssumptionReport::theta)
      .def_readonly("slope_derivative_bound",
                    &AssumptionReport::slope_derivative_bound)
      .def_readonly("divergent_ok", &AssumptionReport::divergent_ok)
      .def_readonly("inlet_velocity_ok", &AssumptionReport::inlet_velocity_ok)
      .def("passes", &AssumptionReport::pass);
  m.def("validate_assumptions", &validate_assumptions, py::arg("profile"),
        py::arg("inlet"), py::arg("grid_n") = 512);

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("fit_tol", &FitOptions::fit_tol)
      .def_readwrite("steps_per_unit", &FitOptions::steps_per_unit)
      .def_readwrite("delta", &FitOptions::delta);

  py::class_<SteadyTransonicSolution>(m, "SteadyTransonicSolution")
      .def_readonly("x_star", &SteadyTransonicSolution::x_star)
      .def_readonly("delta", &SteadyTransonicSolution::delta)
      .def_readonly("exit_density_target",
                    &SteadyTransonicSolution::exit_density_target)
      .def_readonly("exit_density_direction",
                    &SteadyTransonicSolution::exit_density_direction)
      .def("supersonic_at", &SteadyTransonicSolution::supersonic_at)
      .def("subsonic_at", &SteadyTransonicSolution::subsonic_at);
  m.def("fit_transonic", &fit_transonic, py::arg("profile"), py::arg("inlet"),
        py::arg("exit_density"), py::arg("opts") = FitOptions{});
  m.def("exit_density_for_shock_at", &exit_density_for_shock_at,
        py::arg("profile"), py::arg("inlet"), py::arg("s"),
        py::arg("opts") = FitOptions{});

  m.def("rh_jump_moving", &rh_jump_moving, py::arg("left"), py::arg("v"));
  m.def("shock_speed_from_states", &shock_speed_from_states);
  m.def("lax_admissible", &lax_admissible);
  m.def("eval_G", &eval_G, py::arg("background"), py::arg("x"), py::arg("v"),
        py::arg("rho_bar"), py::arg("u_bar"));
  m.def("eval_F", &eval_F, py::arg("background"), py::arg("x"), py::arg("U"),
        py::arg("rho_bar"), py::arg("u_bar"));

  py::class_<LinearizationCoeffs>(m, "LinearizationCoeffs")
      .def_readonly("dG_dx", &LinearizationCoeffs::dG_dx)
      .def_readonly("dG_dv", &LinearizationCoeffs::dG_dv)
      .def_readonly("dG_drho", &LinearizationCoeffs::dG_drho)
      .def_readonly("dG_du", &LinearizationCoeffs::dG_du)
      .def_readonly("dF_dx", &LinearizationCoeffs::dF_dx)
      .def_readonly("dF_dU", &LinearizationCoeffs::dF_dU)
      .def_readonly("dF_drho", &LinearizationCoeffs::dF_drho)
      .def_readonly("dF_du", &LinearizationCoeffs::dF_du);
  m.def("linearization", &linearization);

  py::class_<ScalingConfig>(m, "ScalingConfig")
      .def_readonly("M", &ScalingConfig::M)
      .def_readonly("alpha", &ScalingConfig::alpha)
      .def_readonly("beta", &ScalingConfig::beta)
      .def_readonly("alpha_lo", &ScalingConfig::alpha_lo)
      .def_readonly("beta_lo", &ScalingConfig::beta_lo);
  m.def("scaling_config", &scaling_config, py::arg("background"),
        py::arg("alpha") = std::optional<double>{},
        py::arg("beta") = std::optional<double>{});
  m.def("scale_phi", &scale_phi);
  m.def("unscale_phi", &unscale_phi);

  py::class_<ForcedScalarODE>(m, "ForcedScalarODE")
      .def(py::init<>())
      .def_readwrite("xi", &ForcedScalarODE::xi)
      .def_readwrite("dxi_dpsi0", &ForcedScalarODE::dxi_dpsi0)
      .def_readwrite("dxi_domega0", &ForcedScalarODE::dxi_domega0)
      .def_readwrite("omega", &ForcedScalarODE::omega)
      .def_readwrite("period", &ForcedScalarODE::period);

  py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
      .def_readonly("t", &PeriodicOrbit::t)
      .def_readonly("psi", &PeriodicOrbit::psi)
      .def_readonly("psi_dot", &PeriodicOrbit::psi_dot)
      .def_readonly("psi_ddot", &PeriodicOrbit::psi_ddot)
      .def_readonly("sigma_star", &PeriodicOrbit::sigma_star)
      .def_readonly("poincare_derivative",
                    &PeriodicOrbit::poincare_derivative);

  m.def("stream", &stream, py::arg("ode"), py::arg("t0"), py::arg("x0"),
        py::arg("tau"), py::arg("n_steps") = 4096);
  m.def(
      "find_periodic",
      [](const ForcedScalarODE& ode) { return find_periodic(ode); },
      py::arg("ode"));

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("norm_psi", &EstimateReport::norm_psi)
      .def_readonly("bound_psi", &EstimateReport::bound_psi)
      .def_readonly("norm_psi_dot", &EstimateReport::norm_psi_dot)
      .def_readonly("bound_psi_dot", &EstimateReport::bound_psi_dot)
      .def_readonly("norm_psi_ddot", &EstimateReport::norm_psi_ddot)
      .def_readonly("bound_psi_ddot", &EstimateReport::bound_psi_ddot)
      .def("passes", &EstimateReport::pass);
  m.def("verify_estimates", &verify_estimates, py::arg("orbit"),
        py::arg("ode"), py::arg("slack") = 0.25);
  m.def(
      "compare_periodic",
      [](const ForcedScalarODE& a, const ForcedScalarODE& b, double slack) {
        return compare_periodic(a, b, slack);
      },
      py::arg("ode1"), py::arg("ode2"), py::arg("slack") = 0.25);
  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("diff_psi", &ComparisonReport::diff_psi)
      .def_readonly("bound_psi", &ComparisonReport::bound_psi)
      .def("passes", &ComparisonReport::pass);

  py::class_<BoundaryForcing>(m, "BoundaryForcing")
      .def(py::init<>())
      .def_readwrite("period", &BoundaryForcing::period)
      .def_readwrite("amplitude", &BoundaryForcing::amplitude);

  py::class_<SupersonicPeriodicField>(m, "SupersonicPeriodicField")
      .def_readonly("eps", &SupersonicPeriodicField::eps)
      .def_readonly("measured_gain", &SupersonicPeriodicField::measured_gain);

  py::class_<ShockCurve>(m, "ShockCurve")
      .def_readonly("t", &ShockCurve::t)
      .def_readonly("gamma", &ShockCurve::gamma)
      .def_readonly("gamma_dot", &ShockCurve::gamma_dot)
      .def_readonly("gamma_ddot", &ShockCurve::gamma_ddot);

  py::class_<IterationOptions>(m, "IterationOptions")
      .def(py::init<>())
      .def_readwrite("max_iter", &IterationOptions::max_iter)
      .def_readwrite("nt", &IterationOptions::nt)
      .def_readwrite("nx", &IterationOptions::nx);

  py::class_<IterationReport>(m, "IterationReport")
      .def_readonly("d_history", &IterationReport::d_history)
      .def_readonly("ratio_history", &IterationReport::ratio_history)
      .def_readonly("iterations", &IterationReport::iterations)
      .def_readonly("converged", &IterationReport::converged)
      .def_readonly("beta_used", &IterationReport::beta_used)
      .def_readonly("max_rh_residual_mass",
                    &IterationReport::max_rh_residual_mass)
      .def_readonly("max_rh_residual_momentum",
                    &IterationReport::max_rh_residual_momentum)
      .def_readonly("max_shock_offset", &IterationReport::max_shock_offset)
      .def_readonly("sup_phi_hat", &IterationReport::sup_phi_hat);

  py::class_<TimePeriodicTransonicSolution>(m, "TimePeriodicTransonicSolution")
      .def_readonly("T", &TimePeriodicTransonicSolution::T)
      .def_readonly("shock", &TimePeriodicTransonicSolution::shock)
      .def("subsonic_state", &TimePeriodicTransonicSolution::subsonic_state)
      .def("supersonic_state",
           &TimePeriodicTransonicSolution::supersonic_state);

  m.def("run_periodic", &run_periodic, py::arg("config_json"),
        "Run the full periodic-solution pipeline from a JSON config string");

  py::class_<CrosscheckReport>(m, "CrosscheckReport")
      .def_readonly("max_shock_error_cells",
                    &CrosscheckReport::max_shock_error_cells)
      .def_readonly("l1_mean_final_period",
                    &CrosscheckReport::l1_mean_final_period)
      .def_readonly("dx", &CrosscheckReport::dx);
  m.def("crosscheck", &crosscheck, py::arg("periodic"), py::arg("n_cells"),
        py::arg("n_periods"), py::arg("cfl") = 0.45,
        py::arg("samples_per_period") = 64);
}
