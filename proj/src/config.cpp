#include "tpshock/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace tpshock {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& known) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

RunConfig::Waveform parse_waveform(const json& j, const std::string& where) {
  RunConfig::Waveform w;
  require_keys(j, where, {"waveform", "scale", "harmonic", "phase", "cos",
                          "sin"});
  const std::string kind = j.value("waveform", "none");
  if (kind == "none") {
    w.kind = RunConfig::Waveform::Kind::None;
  } else if (kind == "sin") {
    w.kind = RunConfig::Waveform::Kind::Sin;
  } else if (kind == "cos") {
    w.kind = RunConfig::Waveform::Kind::Cos;
  } else if (kind == "harmonics") {
    w.kind = RunConfig::Waveform::Kind::Harmonics;
    w.cos_coeffs = j.value("cos", std::vector<double>{});
    w.sin_coeffs = j.value("sin", std::vector<double>{});
  } else {
    throw ConfigError(where + ": unknown waveform \"" + kind + "\"");
  }
  w.scale = j.value("scale", 1.0);
  w.harmonic = j.value("harmonic", 1);
  w.phase = j.value("phase", 0.0);
  if (w.harmonic < 1) throw ConfigError(where + ": harmonic must be >= 1");
  return w;
}

PeriodicFn make_waveform_fn(const RunConfig::Waveform& w, double eps,
                            double T) {
  PeriodicFn fn;
  const double om = 2.0 * M_PI / T;
  switch (w.kind) {
    case RunConfig::Waveform::Kind::None:
      break;
    case RunConfig::Waveform::Kind::Sin: {
      const double a = eps * w.scale;
      const double k = om * w.harmonic;
      const double ph = w.phase;
      fn.f = [a, k, ph](double t) { return a * std::sin(k * t + ph); };
      fn.df = [a, k, ph](double t) { return a * k * std::cos(k * t + ph); };
      break;
    }
    case RunConfig::Waveform::Kind::Cos: {
      const double a = eps * w.scale;
      const double k = om * w.harmonic;
      const double ph = w.phase;
      fn.f = [a, k, ph](double t) { return a * std::cos(k * t + ph); };
      fn.df = [a, k, ph](double t) { return -a * k * std::sin(k * t + ph); };
      break;
    }
    case RunConfig::Waveform::Kind::Harmonics: {
      const auto cc = w.cos_coeffs;
      const auto sc = w.sin_coeffs;
      fn.f = [cc, sc, eps, om](double t) {
        double v = 0.0;
        for (std::size_t k = 0; k < cc.size(); ++k) {
          v += cc[k] * std::cos(om * (k + 1) * t);
        }
        for (std::size_t k = 0; k < sc.size(); ++k) {
          v += sc[k] * std::sin(om * (k + 1) * t);
        }
        return eps * v;
      };
      fn.df = [cc, sc, eps, om](double t) {
        double v = 0.0;
        for (std::size_t k = 0; k < cc.size(); ++k) {
          v -= cc[k] * om * (k + 1) * std::sin(om * (k + 1) * t);
        }
        for (std::size_t k = 0; k < sc.size(); ++k) {
          v += sc[k] * om * (k + 1) * std::cos(om * (k + 1) * t);
        }
        return eps * v;
      };
      break;
    }
  }
  return fn;
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.raw = j;
  require_keys(j, "config",
               {"nozzle", "inlet", "target", "forcing", "grids", "tolerances",
                "scaling", "iteration", "stability", "crosscheck",
                "output_dir"});

  if (!j.contains("nozzle")) throw ConfigError("missing \"nozzle\"");
  const json& nz = j.at("nozzle");
  require_keys(nz, "nozzle", {"shape", "kappa", "coefficients", "length"});
  const std::string shape = nz.value("shape", "exponential");
  cfg.length = nz.value("length", 1.0);
  if (shape == "exponential") {
    cfg.shape = NozzleProfile::Shape::Exponential;
    if (!nz.contains("kappa")) throw ConfigError("exponential nozzle needs kappa");
    cfg.kappa = nz.at("kappa").get<double>();
  } else if (shape == "polynomial") {
    cfg.shape = NozzleProfile::Shape::Polynomial;
    if (!nz.contains("coefficients")) {
      throw ConfigError("polynomial nozzle needs coefficients");
    }
    cfg.poly_coeffs = nz.at("coefficients").get<std::vector<double>>();
  } else {
    throw ConfigError("unknown nozzle shape \"" + shape + "\"");
  }

  if (!j.contains("inlet")) throw ConfigError("missing \"inlet\"");
  require_keys(j.at("inlet"), "inlet", {"rho", "u"});
  cfg.inlet.rho = j.at("inlet").value("rho", 1.0);
  cfg.inlet.u = j.at("inlet").value("u", 2.0);

  if (!j.contains("target")) throw ConfigError("missing \"target\"");
  require_keys(j.at("target"), "target", {"exit_density", "shock_position"});
  if (j.at("target").contains("exit_density")) {
    cfg.exit_density = j.at("target").at("exit_density").get<double>();
  }
  if (j.at("target").contains("shock_position")) {
    cfg.shock_position = j.at("target").at("shock_position").get<double>();
  }
  if (cfg.exit_density.has_value() == cfg.shock_position.has_value()) {
    throw ConfigError(
        "target must give exactly one of exit_density, shock_position");
  }

  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    require_keys(f, "forcing",
                 {"period", "epsilon", "rho_left", "u_left", "rho_right"});
    cfg.period = f.value("period", 1.0);
    cfg.epsilon = f.value("epsilon", 0.0);
    if (f.contains("rho_left")) {
      cfg.rho_left = parse_waveform(f.at("rho_left"), "forcing.rho_left");
    }
    if (f.contains("u_left")) {
      cfg.u_left = parse_waveform(f.at("u_left"), "forcing.u_left");
    }
    if (f.contains("rho_right")) {
      cfg.rho_right = parse_waveform(f.at("rho_right"), "forcing.rho_right");
    }
  }

  if (j.contains("grids")) {
    const json& g = j.at("grids");
    require_keys(g, "grids",
                 {"nt", "nx", "steady_steps_per_unit", "ibvp_nx_left",
                  "ibvp_nx_right", "fv_cells"});
    cfg.nt = g.value("nt", cfg.nt);
    cfg.nx = g.value("nx", cfg.nx);
    cfg.steady_steps_per_unit =
        g.value("steady_steps_per_unit", cfg.steady_steps_per_unit);
    cfg.ibvp_nx_left = g.value("ibvp_nx_left", cfg.ibvp_nx_left);
    cfg.ibvp_nx_right = g.value("ibvp_nx_right", cfg.ibvp_nx_right);
    cfg.fv_cells = g.value("fv_cells", cfg.fv_cells);
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    require_keys(t, "tolerances",
                 {"tol_sonic", "fit_tol", "conv_tol_factor", "fp_tol"});
    cfg.tol_sonic = t.value("tol_sonic", cfg.tol_sonic);
    cfg.fit_tol = t.value("fit_tol", cfg.fit_tol);
    cfg.conv_tol_factor = t.value("conv_tol_factor", cfg.conv_tol_factor);
    cfg.fp_tol = t.value("fp_tol", cfg.fp_tol);
  }

  if (j.contains("scaling")) {
    const json& s = j.at("scaling");
    require_keys(s, "scaling", {"alpha", "beta"});
    if (s.contains("alpha") && !s.at("alpha").is_null()) {
      cfg.alpha_override = s.at("alpha").get<double>();
    }
    if (s.contains("beta") && !s.at("beta").is_null()) {
      cfg.beta_override = s.at("beta").get<double>();
    }
  }

  if (j.contains("iteration")) {
    require_keys(j.at("iteration"), "iteration", {"max_iter"});
    cfg.max_iter = j.at("iteration").value("max_iter", cfg.max_iter);
  }

  if (j.contains("stability")) {
    const json& s = j.at("stability");
    require_keys(s, "stability",
                 {"shock_offset", "bump_amplitude", "windows", "cfl"});
    cfg.shock_offset = s.value("shock_offset", cfg.shock_offset);
    cfg.bump_amplitude = s.value("bump_amplitude", cfg.bump_amplitude);
    cfg.windows = s.value("windows", cfg.windows);
    cfg.ibvp_cfl = s.value("cfl", cfg.ibvp_cfl);
  }

  if (j.contains("crosscheck")) {
    const json& c = j.at("crosscheck");
    require_keys(c, "crosscheck",
                 {"n_periods", "cfl", "samples_per_period", "snapshot_every"});
    cfg.n_periods = c.value("n_periods", cfg.n_periods);
    cfg.fv_cfl = c.value("cfl", cfg.fv_cfl);
    cfg.samples_per_period =
        c.value("samples_per_period", cfg.samples_per_period);
    cfg.snapshot_every = c.value("snapshot_every", cfg.snapshot_every);
  }

  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

NozzleProfile make_profile(const RunConfig& cfg) {
  if (cfg.shape == NozzleProfile::Shape::Exponential) {
    return NozzleProfile::exponential(cfg.kappa, cfg.length);
  }
  return NozzleProfile::polynomial(cfg.poly_coeffs, cfg.length);
}

BoundaryForcing make_forcing(const RunConfig& cfg) {
  BoundaryForcing f;
  f.period = cfg.period;
  f.amplitude = cfg.epsilon;
  f.rho_bar_l = make_waveform_fn(cfg.rho_left, cfg.epsilon, cfg.period);
  f.u_bar_l = make_waveform_fn(cfg.u_left, cfg.epsilon, cfg.period);
  f.rho_bar_r = make_waveform_fn(cfg.rho_right, cfg.epsilon, cfg.period);
  f.validate();
  return f;
}

FitOptions make_fit_options(const RunConfig& cfg) {
  FitOptions o;
  o.fit_tol = cfg.fit_tol;
  o.steps_per_unit = cfg.steady_steps_per_unit;
  o.tol_sonic = cfg.tol_sonic;
  o.delta = cfg.epsilon > 0.0 ? 2.0 * std::sqrt(cfg.epsilon) : 0.1 * cfg.length;
  return o;
}

SteadyTransonicSolution fit_background(const RunConfig& cfg) {
  const NozzleProfile p = make_profile(cfg);
  const FitOptions opts = make_fit_options(cfg);
  double target;
  if (cfg.exit_density) {
    target = *cfg.exit_density;
  } else {
    if (!(*cfg.shock_position > 0.0 && *cfg.shock_position < cfg.length)) {
      throw ConfigError("shock_position target must lie inside (0, L)");
    }
    target = exit_density_for_shock_at(p, cfg.inlet, *cfg.shock_position, opts);
  }
  return fit_transonic(p, cfg.inlet, target, opts);
}

ScalingConfig make_scaling(const RunConfig& cfg,
                           const SteadyTransonicSolution& bg) {
  return scaling_config(bg, cfg.alpha_override, cfg.beta_override);
}

}  // namespace tpshock
