// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tpshock/config.hpp"
#include "tpshock/fv.hpp"
#include "tpshock/stability.hpp"

using namespace tpshock;

namespace {

struct Check {
  std::string label;
  bool ok;
  std::string detail;
};

struct CriterionResult {
  bool ok = true;
  std::vector<Check> checks;
  double seconds = 0.0;

  void expect(const std::string& label, bool cond,
              const std::string& detail = "") {
    checks.push_back({label, cond, detail});
    ok = ok && cond;
  }
  void expect_le(const std::string& label, double value, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.3e <= %.3e", value, bound);
    expect(label, value <= bound, buf);
  }
  void expect_lt(const std::string& label, double value, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.3e < %.3e", value, bound);
    expect(label, value < bound, buf);
  }
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

const NozzleProfile& profile() {
  static const NozzleProfile p = NozzleProfile::exponential(0.05, 1.0);
  return p;
}

GasState inlet() { return {1.0, 2.0}; }

FitOptions fit_opts() {
  FitOptions o;
  o.delta = 2.0 * std::sqrt(1e-3);
  return o;
}

const SteadyTransonicSolution& background() {
  static const SteadyTransonicSolution bg = [] {
    const double target =
        exit_density_for_shock_at(profile(), inlet(), 0.5, fit_opts());
    return fit_transonic(profile(), inlet(), target, fit_opts());
  }();
  return bg;
}

BoundaryForcing exit_forcing(double eps, double T = 1.0) {
  BoundaryForcing f;
  f.period = T;
  f.amplitude = eps;
  const double om = 2.0 * M_PI / T;
  f.rho_bar_r.f = [eps, om](double t) { return eps * std::sin(om * t); };
  f.rho_bar_r.df = [eps, om](double t) { return eps * om * std::cos(om * t); };
  f.validate();
  return f;
}

SupersonicPeriodicField zero_supersonic() {
  SupersonicPeriodicField f;
  f.eps = 0.0;
  return f;
}

// ---- criterion 1: steady fitting ----
CriterionResult criterion_steady() {
  CriterionResult r;
  Timer timer;
  const auto opts = fit_opts();
  const double target =
      exit_density_for_shock_at(profile(), inlet(), 0.5, opts);
  const auto bg = fit_transonic(profile(), inlet(), target, opts);
  r.expect_le("shock recovery |x*-0.5|", std::abs(bg.x_star - 0.5), 1e-8);

  const GasState l = bg.supersonic.state(bg.x_star);
  const GasState rr = bg.subsonic.state(bg.x_star);
  r.expect_lt("steady jump residual",
              std::abs(rr.rho - l.rho * l.u * l.u) +
                  std::abs(rr.u - 1.0 / l.u),
              1e-10);

  double drift = 0.0;
  for (const SteadyBranch* b : {&bg.supersonic, &bg.subsonic}) {
    const double f0 = b->rho[0] * b->u[0] * profile().area(b->x[0]);
    for (std::size_t i = 0; i < b->x.size(); ++i) {
      const double fl = b->rho[i] * b->u[i] * profile().area(b->x[i]);
      drift = std::max(drift, std::abs(fl - f0) / f0);
    }
  }
  r.expect_lt("mass-flux drift (relative)", drift, 1e-9);
  r.seconds = timer.seconds();
  r.expect_lt("runtime [s]", r.seconds, 1.0);
  return r;
}

// ---- criterion 2: linearization vs Richardson finite differences ----
CriterionResult criterion_linearization() {
  CriterionResult r;
  Timer timer;
  const auto& bg = background();
  const LinearizationCoeffs c = linearization(bg);
  const double xs = bg.x_star;

  auto richardson = [](const std::function<double(double)>& f, double h) {
    const double d1 = (f(h) - f(-h)) / (2 * h);
    const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
  };
  auto check = [&](const std::string& name,
                   const std::function<double(double)>& f, double expect) {
    const double fd = richardson(f, 1e-5);
    const double err = std::abs(fd - expect) / std::max(std::abs(expect), 1e-2);
    r.expect_lt(name + " relative FD error", err, 1e-6);
  };
  check("dG/dx", [&](double d) { return eval_G(bg, xs + d, 0, 0, 0); }, c.dG_dx);
  check("dG/dv", [&](double d) { return eval_G(bg, xs, d, 0, 0); }, c.dG_dv);
  check("dG/drho", [&](double d) { return eval_G(bg, xs, 0, d, 0); }, c.dG_drho);
  check("dG/du", [&](double d) { return eval_G(bg, xs, 0, 0, d); }, c.dG_du);
  check("dF/dx", [&](double d) { return eval_F(bg, xs + d, 0, 0, 0); }, c.dF_dx);
  check("dF/dU", [&](double d) { return eval_F(bg, xs, d, 0, 0); }, c.dF_dU);
  check("dF/drho", [&](double d) { return eval_F(bg, xs, 0, d, 0); }, c.dF_drho);
  check("dF/du", [&](double d) { return eval_F(bg, xs, 0, 0, d); }, c.dF_du);
  r.seconds = timer.seconds();
  r.expect_lt("runtime [s]", r.seconds, 1.0);
  return r;
}

// ---- criterion 3: periodic-ODE oracle ----
CriterionResult criterion_periodic_ode() {
  CriterionResult r;
  Timer timer;
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
  r.expect_lt("orbit vs closed form (sup)", err, 1e-8);
  r.expect("Poincare derivative in (0,1)",
           orbit.poincare_derivative > 0.0 && orbit.poincare_derivative < 1.0,
           std::to_string(orbit.poincare_derivative));
  const EstimateReport est = verify_estimates(orbit, ode, 0.25);
  r.expect("norm bounds with slack 0.25", est.pass());

  ForcedScalarODE zero = ode;
  zero.omega[0] = nullptr;
  const ComparisonReport cmp = compare_periodic(ode, zero, 0.25);
  r.expect("two-forcing comparison bound", cmp.pass());
  r.seconds = timer.seconds();
  r.expect_lt("runtime [s]", r.seconds, 1.0);
  return r;
}

// ---- criteria 4 and 5: contraction and the periodic solution ----
void criteria_iteration(CriterionResult& c4, CriterionResult& c5) {
  Timer timer;
  const auto& bg = background();
  const ScalingConfig sc = scaling_config(bg);
  const double eps = 1e-3;
  const BoundaryForcing f = exit_forcing(eps);
  const SupersonicPeriodicField sup =
      solve_supersonic_periodic(profile(), bg, f, {512, 512});
  IterationOptions opts;  // default 512 x 512 grids, max 60 iterations
  auto [sol, rep] = run_iteration(bg, sup, f, sc, opts);

  c4.expect("converged", rep.converged,
            "iterations=" + std::to_string(rep.iterations));
  c4.expect("within 60 iterations", rep.iterations <= 60);
  double worst = 0.0;
  for (double q : rep.ratio_history) worst = std::max(worst, q);
  c4.expect_le("max contraction ratio vs beta=" + std::to_string(sc.beta),
               worst, sc.beta);
  c4.seconds = timer.seconds();
  c4.expect_lt("runtime [s]", c4.seconds, 120.0);

  // criterion 5 on the same converged run
  c5.expect_lt("field periodicity defect", rep.periodicity_defect_field, 1e-8);
  c5.expect_lt("shock periodicity defect", rep.periodicity_defect_gamma, 1e-8);
  bool inside = true;
  for (double g : sol.shock.gamma) inside = inside && g > 0.0 && g < 1.0;
  c5.expect("shock stays inside (0, L)", inside);
  c5.expect_lt("max mass jump residual", rep.max_rh_residual_mass, 1e-6);
  c5.expect_lt("max momentum jump residual", rep.max_rh_residual_momentum,
               1e-6);

  auto [sol2, rep2] = run_iteration(bg, sup, exit_forcing(eps / 2), sc, opts);
  const double n1 = std::max(rep.sup_phi_hat, rep.max_shock_offset);
  const double n2 = std::max(rep2.sup_phi_hat, rep2.max_shock_offset);
  const double ratio = n1 / n2;
  c5.expect("linear amplitude response (halving: ratio within 15% of 2)",
            ratio > 2.0 / 1.15 && ratio < 2.0 * 1.15,
            "ratio=" + std::to_string(ratio));
  c5.seconds = timer.seconds();
}

// ---- criterion 6: dynamical stability ----
CriterionResult criterion_stability() {
  CriterionResult r;
  Timer timer;
  const auto& bg = background();
  const ScalingConfig sc = scaling_config(bg);
  const BoundaryForcing f = exit_forcing(1e-3);
  IterationOptions iopts;
  iopts.nt = 256;
  iopts.nx = 256;
  auto [sol, rep] = run_iteration(bg, zero_supersonic(), f, sc, iopts);
  const double T0 = compute_T0(sol);
  const double t_end = 6.2 * T0;

  auto run_case = [&](double offset, double bump, int nxl, int nxr) {
    const PiecewiseInitialData init = init_from_periodic(sol, offset, bump,
                                                         nxl, nxr);
    const TrackedTrajectory traj =
        solve_ibvp(bg, f, sc, init, t_end, {}, &sol);
    return measure_decay(traj, sol);
  };

  const StabilityReport displaced = run_case(0.01, 0.0, 1024, 2048);
  bool factors_ok = displaced.window_factors.size() >= 4;
  for (std::size_t w = 1; w < displaced.window_factors.size(); ++w) {
    factors_ok = factors_ok && displaced.window_factors[w] < 1.0;
  }
  r.expect("displaced shock: window factors < 1 after the first",
           factors_ok);
  r.expect("displaced shock: xi_fit < 1",
           displaced.xi_fit_defined && displaced.xi_fit < 1.0,
           "xi=" + std::to_string(displaced.xi_fit));

  const StabilityReport bumped = run_case(0.0, 1e-3, 1024, 2048);
  bool bump_ok = bumped.window_factors.size() >= 4;
  for (std::size_t w = 1; w < bumped.window_factors.size(); ++w) {
    bump_ok = bump_ok && bumped.window_factors[w] < 1.0;
  }
  r.expect("field perturbation: window factors < 1 after the first", bump_ok);
  r.expect("field perturbation: xi_fit < 1",
           bumped.xi_fit_defined && bumped.xi_fit < 1.0,
           "xi=" + std::to_string(bumped.xi_fit));

  const StabilityReport refined = run_case(0.01, 0.0, 2048, 4096);
  const double drift =
      std::abs(refined.xi_fit - displaced.xi_fit) / displaced.xi_fit;
  r.expect_le("xi_fit stable under 2x refinement (relative)", drift, 0.05);
  r.seconds = timer.seconds();
  r.expect_lt("runtime [s]", r.seconds, 300.0);
  return r;
}

// ---- criterion 7: shock-capturing cross-validation ----
CriterionResult criterion_crosscheck() {
  CriterionResult r;
  Timer timer;
  const auto& bg = background();
  const ScalingConfig sc = scaling_config(bg);
  const BoundaryForcing f = exit_forcing(1e-3);
  IterationOptions iopts;
  iopts.nt = 256;
  iopts.nx = 256;
  auto [sol, rep] = run_iteration(bg, zero_supersonic(), f, sc, iopts);

  const CrosscheckReport fine = crosscheck(sol, 1024, 3.0);
  r.expect_le("shock tracked within 3 cells at dx=1/1024",
              fine.max_shock_error_cells, 3.0);
  const CrosscheckReport coarse = crosscheck(sol, 512, 3.0);
  const double ratio = fine.l1_mean_final_period / coarse.l1_mean_final_period;
  r.expect("first-order L1 convergence (halving dx: ratio in [0.35, 0.65])",
           ratio > 0.35 && ratio < 0.65, "ratio=" + std::to_string(ratio));
  r.seconds = timer.seconds();
  r.expect_lt("runtime [s]", r.seconds, 300.0);
  return r;
}

// ---- criterion 8: assumption gates ----
CriterionResult criterion_gates() {
  CriterionResult r;
  Timer timer;

  // converging nozzle violates the divergence assumption
  const NozzleProfile conv = NozzleProfile::polynomial({1.0, -0.05}, 1.0);
  const AssumptionReport a = validate_assumptions(conv, inlet(), 128);
  r.expect("converging nozzle rejected", !a.pass() && !a.divergent_ok);

  // inlet outside (1, 2 + sqrt(3))
  const AssumptionReport b = validate_assumptions(profile(), {1.0, 4.0}, 128);
  r.expect("too-fast inlet rejected", !b.pass() && !b.inlet_velocity_ok);
  const AssumptionReport c = validate_assumptions(profile(), {1.0, 1.0}, 128);
  r.expect("sonic inlet rejected", !c.pass() && !c.inlet_velocity_ok);

  // M >= 1 surfaces as DissipationTooWeak before any solver runs
  bool threw = false;
  std::string msg;
  try {
    const GasState fast{1.0, 2.0 + std::sqrt(3.0)};
    const double target =
        exit_density_for_shock_at(profile(), fast, 0.5, fit_opts());
    const auto bg2 = fit_transonic(profile(), fast, target, fit_opts());
    scaling_config(bg2);
  } catch (const DissipationTooWeak& e) {
    threw = true;
    msg = e.what();
  }
  r.expect("M >= 1 rejected with the inequality reported",
           threw && msg.find("M") != std::string::npos, msg);
  r.seconds = timer.seconds();
  return r;
}

void print_result(int index, const std::string& name,
                  const CriterionResult& r) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", r.ok ? "PASS" : "FAIL",
              index, name.c_str(), r.seconds);
  for (const auto& c : r.checks) {
    if (!c.ok) {
      std::printf("       failed: %s  %s\n", c.label.c_str(),
                  c.detail.c_str());
    }
  }
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int idx, const std::string& name, CriterionResult r) {
    print_result(idx, name, r);
    if (!r.ok) ++failures;
  };

  report(1, "steady transonic fitting", criterion_steady());
  report(2, "linearization fidelity", criterion_linearization());
  report(3, "periodic-ODE oracle", criterion_periodic_ode());

  CriterionResult c4, c5;
  criteria_iteration(c4, c5);
  report(4, "iteration contraction", c4);
  report(5, "periodic-solution conclusions", c5);

  report(6, "dynamical stability", criterion_stability());
  report(7, "shock-capturing cross-validation", criterion_crosscheck());
  report(8, "assumption gates", criterion_gates());

  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
