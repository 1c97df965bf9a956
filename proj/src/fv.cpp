#include "tpshock/fv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpshock {

namespace {

struct Flux {
  double mass;
  double mom;
};

Flux isothermal_flux(double rho, double u) {
  return {rho * u, rho * u * u + rho};
}

Flux hll(double rho_l, double u_l, double rho_r, double u_r) {
  const double sl = std::min(u_l - 1.0, u_r - 1.0);
  const double sr = std::max(u_l + 1.0, u_r + 1.0);
  const Flux fl = isothermal_flux(rho_l, u_l);
  const Flux fr = isothermal_flux(rho_r, u_r);
  if (sl >= 0.0) return fl;
  if (sr <= 0.0) return fr;
  const double ml = rho_l * u_l;
  const double mr = rho_r * u_r;
  return {(sr * fl.mass - sl * fr.mass + sl * sr * (rho_r - rho_l)) /
              (sr - sl),
          (sr * fl.mom - sl * fr.mom + sl * sr * (mr - ml)) / (sr - sl)};
}

}  // namespace

FvState fv_init(const NozzleProfile& p, int n_cells,
                const std::function<GasState(double x)>& state_of) {
  FvState s;
  s.dx = p.length() / n_cells;
  s.x.resize(n_cells);
  s.a_rho.resize(n_cells);
  s.a_m.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    s.x[i] = (i + 0.5) * s.dx;
    const GasState g = state_of(s.x[i]);
    const double a = p.area(s.x[i]);
    s.a_rho[i] = a * g.rho;
    s.a_m[i] = a * g.rho * g.u;
  }
  return s;
}

double fv_step_inplace(FvState& s, const NozzleProfile& p, const FvBc& bc,
                       double cfl, FvStepInfo* info) {
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must be in (0,1)");
  const int n = s.n();
  const double dx = s.dx;

  // primitive cell values
  static thread_local std::vector<double> rho, u;
  rho.resize(n);
  u.resize(n);
  double smax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = p.area(s.x[i]);
    rho[i] = s.a_rho[i] / a;
    if (!(rho[i] > 0.0)) {
      throw PositivityLoss("non-positive density in cell " +
                           std::to_string(i));
    }
    u[i] = s.a_m[i] / s.a_rho[i];
    smax = std::max(smax, std::abs(u[i]) + 1.0);
  }
  const double dt = cfl * dx / smax;

  // ghost states
  double rho_gl, u_gl, rho_gr, u_gr;
  if (bc.kind == FvBc::Kind::PeriodicInSpace) {
    rho_gl = rho[n - 1];
    u_gl = u[n - 1];
    rho_gr = rho[0];
    u_gr = u[0];
  } else {
    rho_gl = bc.rho_in(s.time);
    u_gl = bc.u_in(s.time);
    rho_gr = bc.rho_out(s.time);
    u_gr = u[n - 1];
  }

  static thread_local std::vector<Flux> f;
  f.resize(n + 1);
  f[0] = hll(rho_gl, u_gl, rho[0], u[0]);
  for (int i = 1; i < n; ++i) {
    f[i] = hll(rho[i - 1], u[i - 1], rho[i], u[i]);
  }
  f[n] = hll(rho[n - 1], u[n - 1], rho_gr, u_gr);

  static thread_local std::vector<double> a_face;
  a_face.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    a_face[i] = p.area(std::min(i * dx, p.length()));
  }
  for (int i = 0; i < n; ++i) {
    s.a_rho[i] -=
        dt / dx * (a_face[i + 1] * f[i + 1].mass - a_face[i] * f[i].mass);
    s.a_m[i] -=
        dt / dx * (a_face[i + 1] * f[i + 1].mom - a_face[i] * f[i].mom);
    s.a_m[i] += dt * p.area_prime(s.x[i]) * rho[i];
  }
  s.time += dt;
  if (info) {
    info->dt = dt;
    info->boundary_mass_flux_in = a_face[0] * f[0].mass;
    info->boundary_mass_flux_out = a_face[n] * f[n].mass;
  }
  return dt;
}

FvState fv_step(const FvState& s, const NozzleProfile& p, const FvBc& bc,
                double cfl) {
  FvState out = s;
  fv_step_inplace(out, p, bc, cfl);
  return out;
}

double detect_shock(const FvState& s, const NozzleProfile& p) {
  const int n = s.n();
  if (n < 8) throw NoShockFound("grid too coarse");
  std::vector<double> rho(n);
  double rho_mean = 0.0;
  for (int i = 0; i < n; ++i) {
    rho[i] = s.rho(i, p);
    rho_mean += rho[i];
  }
  rho_mean /= n;
  std::vector<double> jumps(n - 1);
  for (int i = 0; i + 1 < n; ++i) jumps[i] = std::abs(rho[i + 1] - rho[i]);
  const int imax = static_cast<int>(
      std::max_element(jumps.begin(), jumps.end()) - jumps.begin());
  std::vector<double> sorted = jumps;
  std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
  const double median = sorted[(n - 1) / 2];
  if (jumps[imax] < 5.0 * median || jumps[imax] < 1e-6 * rho_mean) {
    throw NoShockFound("no dominant density jump (max=" +
                       std::to_string(jumps[imax]) + ", median=" +
                       std::to_string(median) + ")");
  }
  // conservation-consistent sub-cell position using the plateaus flanking
  // the (possibly smeared) jump cells
  const int il = std::max(0, imax - 2);
  const int ir = std::min(n - 1, imax + 3);
  const double rho_l = rho[il];
  const double rho_r = rho[ir];
  double excess = 0.0;
  for (int i = il + 1; i < ir; ++i) excess += (rho[i] - rho_l) * s.dx;
  const double x_right_edge = s.x[ir] - 0.5 * s.dx;
  double xs = x_right_edge - excess / (rho_r - rho_l);
  xs = std::clamp(xs, s.x[il], s.x[ir]);
  return xs;
}

CrosscheckReport crosscheck(const TimePeriodicTransonicSolution& periodic,
                            int n_cells, double n_periods, double cfl,
                            int samples_per_period) {
  const SteadyTransonicSolution& bg = periodic.background;
  const NozzleProfile& p = bg.profile;
  const double T = periodic.T;
  const double gamma0 = periodic.shock.gamma.front();

  FvState s = fv_init(p, n_cells, [&](double x) {
    return x < gamma0 ? periodic.supersonic_state(0.0, x)
                      : periodic.subsonic_state(0.0, x);
  });

  FvBc bc;
  bc.kind = FvBc::Kind::InletOutlet;
  const GasState inlet0 = bg.supersonic.state(0.0);
  const double rho_exit = bg.subsonic.rho.back();
  const BoundaryForcing& f = periodic.forcing;
  bc.rho_in = [&f, inlet0](double t) { return inlet0.rho + f.rho_bar_l(t); };
  bc.u_in = [&f, inlet0](double t) { return inlet0.u + f.u_bar_l(t); };
  bc.rho_out = [&f, rho_exit](double t) { return rho_exit + f.rho_bar_r(t); };

  CrosscheckReport rep;
  rep.dx = s.dx;
  rep.n_cells = n_cells;
  rep.n_periods = n_periods;

  const double t_end = n_periods * T;
  const double sample_dt = T / samples_per_period;
  double next_sample = sample_dt;
  double l1_acc = 0.0;
  int l1_count = 0;
  while (s.time < t_end - 1e-12) {
    fv_step_inplace(s, p, bc, cfl);
    if (s.time >= next_sample - 1e-12 || s.time >= t_end - 1e-12) {
      next_sample += sample_dt;
      const double g_ref = periodic.shock.gamma_at(s.time);
      double xs = 0.0;
      bool found = true;
      try {
        xs = detect_shock(s, p);
      } catch (const NoShockFound&) {
        found = false;
      }
      double l1 = 0.0;
      for (int i = 0; i < s.n(); ++i) {
        const double x = s.x[i];
        if (std::abs(x - g_ref) <= 5.0 * s.dx) continue;
        const GasState ref = x < g_ref ? periodic.supersonic_state(s.time, x)
                                       : periodic.subsonic_state(s.time, x);
        l1 += std::abs(s.rho(i, p) - ref.rho) * s.dx;
      }
      rep.sample_t.push_back(s.time);
      rep.l1_rho.push_back(l1);
      const double err = found ? std::abs(xs - g_ref) : periodic.background.length();
      rep.shock_error.push_back(err);
      rep.max_shock_error = std::max(rep.max_shock_error, err);
      if (s.time > t_end - T) {
        l1_acc += l1;
        ++l1_count;
      }
    }
  }
  rep.max_shock_error_cells = rep.max_shock_error / s.dx;
  rep.l1_mean_final_period = l1_count > 0 ? l1_acc / l1_count : 0.0;
  return rep;
}

}  // namespace tpshock
