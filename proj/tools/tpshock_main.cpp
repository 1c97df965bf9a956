#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpshock/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tpshock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct Paths {
  fs::path dir;
  explicit Paths(const RunConfig& cfg) {
    const char* env = std::getenv("NOZZLE_OUT");
    dir = env ? fs::path(env) : fs::path(cfg.output_dir);
    fs::create_directories(dir);
  }
  fs::path file(const std::string& name) const { return dir / name; }
};

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

std::ofstream open_csv(const fs::path& p, const std::string& header) {
  std::ofstream out(p);
  out.precision(17);
  out << header << "\n";
  return out;
}

/// Gate shared by every subcommand: structural assumptions first.
struct Validated {
  NozzleProfile profile;
  AssumptionReport assumptions;
  double M = 0.0;
};

Validated validate_gates(const RunConfig& cfg) {
  Validated v;
  v.profile = make_profile(cfg);
  v.assumptions = validate_assumptions(v.profile, cfg.inlet, 512);
  const double u0 = cfg.inlet.u;
  v.M = (u0 - 1.0) * (u0 - 1.0) / (2.0 * u0);
  std::string reason;
  if (!v.assumptions.divergent_ok) {
    reason = "nozzle is not divergent: need a'(x) > 0 on [0, L]";
  } else if (!v.assumptions.inlet_velocity_ok) {
    reason = "inlet velocity violates 1 < u < 2 + sqrt(3): u = " +
             std::to_string(u0);
  } else if (!(v.M < 1.0)) {
    reason = "dissipation number M = (u-1)^2/(2u) = " + std::to_string(v.M) +
             " must be < 1";
  }
  if (!reason.empty()) throw ConfigError(reason);
  return v;
}

json scaling_json(const ScalingConfig& s) {
  return json{{"M", s.M},
              {"alpha_interval", {s.alpha_lo, 1.0}},
              {"alpha", s.alpha},
              {"beta_interval", {s.beta_lo, 1.0}},
              {"beta", s.beta}};
}

json assumption_json(const AssumptionReport& a) {
  return json{{"kappa", a.kappa},
              {"theta", a.theta},
              {"slope_derivative_bound", a.slope_derivative_bound},
              {"divergent_ok", a.divergent_ok},
              {"inlet_velocity", a.inlet_velocity},
              {"inlet_velocity_ok", a.inlet_velocity_ok},
              {"pass", a.pass()}};
}

int cmd_validate(const RunConfig& cfg) {
  const Validated v = validate_gates(cfg);
  const SteadyTransonicSolution bg = fit_background(cfg);
  const ScalingConfig s = make_scaling(cfg, bg);
  json out = scaling_json(s);
  out["assumptions"] = assumption_json(v.assumptions);
  out["x_star"] = bg.x_star;
  out["exit_density"] = bg.exit_density_target;
  out["config"] = cfg.raw;
  std::cout << out.dump(2) << "\n";
  Paths paths(cfg);
  write_json(paths.file("validate.json"), out);
  return kExitOk;
}

void write_branch_csv(const fs::path& p, const SteadyBranch& b) {
  auto out = open_csv(p, "x,rho,u,regime");
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    out << b.x[i] << "," << b.rho[i] << "," << b.u[i] << ","
        << regime_name(b.regime) << "\n";
  }
}

int cmd_steady(const RunConfig& cfg) {
  validate_gates(cfg);
  const SteadyTransonicSolution bg = fit_background(cfg);
  Paths paths(cfg);
  write_branch_csv(paths.file("steady_supersonic.csv"), bg.supersonic);
  write_branch_csv(paths.file("steady_subsonic.csv"), bg.subsonic);
  json rep{{"x_star", bg.x_star},
           {"delta", bg.delta},
           {"exit_density", bg.exit_density_target},
           {"exit_density_direction", bg.exit_density_direction},
           {"config", cfg.raw}};
  write_json(paths.file("steady_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
  return kExitOk;
}

struct PeriodicRun {
  SteadyTransonicSolution bg;
  ScalingConfig scaling;
  BoundaryForcing forcing;
  SupersonicPeriodicField sup;
  TimePeriodicTransonicSolution sol;
  IterationReport rep;
};

PeriodicRun run_periodic_pipeline(const RunConfig& cfg) {
  PeriodicRun r;
  r.bg = fit_background(cfg);
  r.scaling = make_scaling(cfg, r.bg);
  r.forcing = make_forcing(cfg);
  r.sup = solve_supersonic_periodic(r.bg.profile, r.bg, r.forcing,
                                    {cfg.nt, cfg.nx}, cfg.tol_sonic);
  IterationOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.conv_tol_factor = cfg.conv_tol_factor;
  opts.nt = cfg.nt;
  opts.nx = cfg.nx;
  opts.tol_sonic = cfg.tol_sonic;
  auto [sol, rep] = run_iteration(r.bg, r.sup, r.forcing, r.scaling, opts);
  r.sol = std::move(sol);
  r.rep = std::move(rep);
  return r;
}

json iteration_report_json(const PeriodicRun& r, const RunConfig& cfg) {
  json mod = json::array();
  for (const auto& m : r.rep.modulus) {
    mod.push_back({{"delta", m.delta},
                   {"dt_phi1", m.dt_phi1},
                   {"dx_phi1", m.dx_phi1},
                   {"dt_phi2", m.dt_phi2},
                   {"dx_phi2", m.dx_phi2}});
  }
  return json{
      {"iterations", r.rep.iterations},
      {"converged", r.rep.converged},
      {"conv_tol", r.rep.conv_tol},
      {"d_history", r.rep.d_history},
      {"contraction_ratios", r.rep.ratio_history},
      {"c1_norm_history", r.rep.c1_norm_history},
      {"shock_c2_history", r.rep.shock_c2_history},
      {"beta", r.rep.beta_used},
      {"beta_candidate_reflection", r.rep.beta_candidate_reflection},
      {"beta_candidate_alpha", r.rep.beta_candidate_alpha},
      {"max_rh_residual_mass", r.rep.max_rh_residual_mass},
      {"max_rh_residual_momentum", r.rep.max_rh_residual_momentum},
      {"periodicity_defect_field", r.rep.periodicity_defect_field},
      {"periodicity_defect_gamma", r.rep.periodicity_defect_gamma},
      {"max_shock_offset", r.rep.max_shock_offset},
      {"sup_phi_hat", r.rep.sup_phi_hat},
      {"supersonic_gain", r.sup.measured_gain},
      {"modulus_of_continuity", mod},
      {"scaling", scaling_json(r.scaling)},
      {"config", cfg.raw}};
}

int cmd_periodic(const RunConfig& cfg) {
  validate_gates(cfg);
  PeriodicRun r = run_periodic_pipeline(cfg);
  Paths paths(cfg);

  {
    auto out = open_csv(paths.file("periodic_supersonic.csv"), "t,x,rho,u");
    const GridField2D& rb = r.sup.rho_bar;
    for (int i = 0; i <= rb.nt; ++i) {
      for (int j = 0; j <= rb.nx; ++j) {
        const double t = rb.T * i / rb.nt;
        const double x = rb.x_lo + (rb.x_hi - rb.x_lo) * j / rb.nx;
        const GasState base = r.bg.supersonic.state(x);
        out << t << "," << x << "," << base.rho + rb.at(i, j) << ","
            << base.u + r.sup.u_bar.at(i, j) << "\n";
      }
    }
  }
  {
    auto out = open_csv(paths.file("periodic_subsonic.csv"), "t,x,rho,u");
    const GridField2D& rr = r.sol.rho_r;
    for (int i = 0; i <= rr.nt; ++i) {
      for (int j = 0; j <= rr.nx; ++j) {
        const double t = rr.T * i / rr.nt;
        const double x = rr.x_lo + (rr.x_hi - rr.x_lo) * j / rr.nx;
        out << t << "," << x << "," << rr.at(i, j) << ","
            << r.sol.u_r.at(i, j) << "\n";
      }
    }
  }
  {
    auto out = open_csv(paths.file("periodic_shock.csv"), "t,gamma,gamma_dot");
    for (std::size_t i = 0; i < r.sol.shock.t.size(); ++i) {
      out << r.sol.shock.t[i] << "," << r.sol.shock.gamma[i] << ","
          << r.sol.shock.gamma_dot[i] << "\n";
    }
  }
  const json rep = iteration_report_json(r, cfg);
  write_json(paths.file("iteration_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
  return kExitOk;
}

int cmd_stability(const RunConfig& cfg) {
  validate_gates(cfg);
  PeriodicRun r = run_periodic_pipeline(cfg);
  const double T0 = compute_T0(r.sol);
  const double t_end = cfg.windows * T0;

  const PiecewiseInitialData init =
      init_from_periodic(r.sol, cfg.shock_offset, cfg.bump_amplitude,
                         cfg.ibvp_nx_left, cfg.ibvp_nx_right);
  IbvpOptions opts;
  opts.cfl = cfg.ibvp_cfl;
  opts.tol_sonic = cfg.tol_sonic;
  const TrackedTrajectory traj = solve_ibvp(r.bg, r.forcing, r.scaling, init,
                                            t_end, opts, &r.sol);
  const StabilityReport srep = measure_decay(traj, r.sol);

  Paths paths(cfg);
  {
    auto out = open_csv(paths.file("stability.csv"),
                        "t,gamma,gamma_dot,theta,supersonic_gap");
    for (std::size_t k = 0; k < traj.metric_t.size(); ++k) {
      const double t = traj.metric_t[k];
      // gamma series is per-step; find the matching index by time
      const std::size_t i = std::min(
          traj.t.size() - 1,
          static_cast<std::size_t>(t / traj.t_end * (traj.t.size() - 1)));
      out << t << "," << traj.gamma[i] << "," << traj.gamma_dot[i] << ","
          << traj.theta[k] << "," << traj.supersonic_gap[k] << "\n";
    }
  }
  json rep{{"T0", srep.T0},
           {"xi_fit", srep.xi_fit},
           {"xi_fit_defined", srep.xi_fit_defined},
           {"xi_theory_order_eps_dropped", srep.xi_theory},
           {"window_theta_max", srep.window_theta_max},
           {"window_factors", srep.window_factors},
           {"window_shock_gap_max", srep.window_shock_gap_max},
           {"theta_peak", srep.theta_peak},
           {"perturbation_size", init.perturbation_size},
           {"config", cfg.raw}};
  write_json(paths.file("stability_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
  return kExitOk;
}

int cmd_crosscheck(const RunConfig& cfg) {
  validate_gates(cfg);
  PeriodicRun r = run_periodic_pipeline(cfg);
  const CrosscheckReport c = crosscheck(r.sol, cfg.fv_cells, cfg.n_periods,
                                        cfg.fv_cfl, cfg.samples_per_period);
  Paths paths(cfg);

  // capture snapshots on a rerun cadence directly from a fresh solve
  {
    FvState s = fv_init(r.bg.profile, cfg.fv_cells, [&](double x) {
      return x < r.sol.shock.gamma.front() ? r.sol.supersonic_state(0.0, x)
                                           : r.sol.subsonic_state(0.0, x);
    });
    FvBc bc;
    const GasState inlet0 = r.bg.supersonic.state(0.0);
    const double rho_exit = r.bg.subsonic.rho.back();
    bc.rho_in = [&](double t) { return inlet0.rho + r.forcing.rho_bar_l(t); };
    bc.u_in = [&](double t) { return inlet0.u + r.forcing.u_bar_l(t); };
    bc.rho_out = [&](double t) { return rho_exit + r.forcing.rho_bar_r(t); };
    auto out = open_csv(paths.file("crosscheck_snapshots.csv"), "t,x,rho,u");
    const double t_end = cfg.n_periods * r.sol.T;
    const double snap_dt =
        cfg.snapshot_every * r.sol.T / cfg.samples_per_period;
    double next_snap = 0.0;
    while (true) {
      if (s.time >= next_snap - 1e-12) {
        for (int i = 0; i < s.n(); ++i) {
          out << s.time << "," << s.x[i] << "," << s.rho(i, r.bg.profile)
              << "," << s.u(i) << "\n";
        }
        next_snap += snap_dt;
      }
      if (s.time >= t_end - 1e-12) break;
      fv_step_inplace(s, r.bg.profile, bc, cfg.fv_cfl);
    }
  }

  json rep{{"dx", c.dx},
           {"n_cells", c.n_cells},
           {"n_periods", c.n_periods},
           {"max_shock_error", c.max_shock_error},
           {"max_shock_error_cells", c.max_shock_error_cells},
           {"l1_mean_final_period", c.l1_mean_final_period},
           {"sample_t", c.sample_t},
           {"shock_error", c.shock_error},
           {"l1_rho", c.l1_rho},
           {"config", cfg.raw}};
  write_json(paths.file("crosscheck_report.json"), rep);
  std::cout << rep.dump(2) << "\n";
  return kExitOk;
}

int cmd_periodic_ode_demo(const RunConfig& cfg) {
  // linear oracle: psi' = -psi + eps sin(t), T = 2 pi
  const double eps = 0.01;
  ForcedScalarODE ode;
  ode.period = 2.0 * M_PI;
  ode.xi = [](double psi, double w1, double, double) { return -psi + w1; };
  ode.dxi_dpsi0 = -1.0;
  ode.dxi_domega0 = {1.0, 0.0, 0.0};
  ode.omega[0] = [eps](double t, double) { return eps * std::sin(t); };
  const PeriodicOrbit orbit = find_periodic(ode);
  double err = 0.0;
  for (std::size_t i = 0; i < orbit.t.size(); ++i) {
    const double exact =
        0.5 * eps * (std::sin(orbit.t[i]) - std::cos(orbit.t[i]));
    err = std::max(err, std::abs(orbit.psi[i] - exact));
  }
  const EstimateReport est = verify_estimates(orbit, ode);

  ForcedScalarODE ode0 = ode;
  ode0.omega[0] = nullptr;
  const ComparisonReport cmp = compare_periodic(ode, ode0);

  json rep{{"sup_error_vs_closed_form", err},
           {"poincare_derivative", orbit.poincare_derivative},
           {"sigma_star", orbit.sigma_star},
           {"norm_bounds_pass", est.pass()},
           {"comparison_bound_pass", cmp.pass()},
           {"comparison_diff", cmp.diff_psi},
           {"comparison_bound", cmp.bound_psi},
           {"config", cfg.raw}};
  Paths paths(cfg);
  write_json(paths.file("periodic_ode_demo.json"), rep);
  std::cout << rep.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-periodic transonic shock laboratory for quasi-1D "
               "isothermal nozzle flow"};
  app.require_subcommand(1);

  std::string config_path;
  auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required();
    return sub;
  };
  CLI::App* s_validate =
      add("validate", "Check structural assumptions and print the scaling");
  CLI::App* s_steady = add("steady", "Fit the steady transonic shock");
  CLI::App* s_periodic =
      add("periodic", "Construct the time-periodic transonic solution");
  CLI::App* s_stability =
      add("stability", "Measure decay toward the periodic solution");
  CLI::App* s_crosscheck =
      add("crosscheck", "Validate against the shock-capturing solver");
  CLI::App* s_demo = add("periodic-ode-demo", "Periodic-ODE solver demo");
  s_demo->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (s_validate->parsed()) return cmd_validate(cfg);
    if (s_steady->parsed()) return cmd_steady(cfg);
    if (s_periodic->parsed()) return cmd_periodic(cfg);
    if (s_stability->parsed()) return cmd_stability(cfg);
    if (s_crosscheck->parsed()) return cmd_crosscheck(cfg);
    if (s_demo->parsed()) return cmd_periodic_ode_demo(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ExitDensityUnattainable& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DissipationTooWeak& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainViolation& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
