#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "tpshock/fv.hpp"
#include "tpshock/stability.hpp"

namespace tpshock {

/// Parsed experiment configuration; `raw` keeps the resolved document that
/// gets embedded into every report for provenance.
struct RunConfig {
  nlohmann::json raw;

  // nozzle
  NozzleProfile::Shape shape = NozzleProfile::Shape::Exponential;
  double kappa = 0.05;
  std::vector<double> poly_coeffs;
  double length = 1.0;

  GasState inlet{1.0, 2.0};

  // target: exactly one of the two
  std::optional<double> exit_density;
  std::optional<double> shock_position;

  // forcing
  double period = 1.0;
  double epsilon = 0.0;
  struct Waveform {
    enum class Kind { None, Sin, Cos, Harmonics };
    Kind kind = Kind::None;
    double scale = 1.0;
    int harmonic = 1;
    double phase = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;
  };
  Waveform rho_left, u_left, rho_right;

  // grids
  int nt = 512;
  int nx = 512;
  int steady_steps_per_unit = 2000;
  int ibvp_nx_left = 1024;
  int ibvp_nx_right = 2048;
  int fv_cells = 1024;

  // tolerances
  double tol_sonic = 1e-6;
  double fit_tol = 1e-10;
  double conv_tol_factor = 1e-10;
  double fp_tol = 1e-12;

  std::optional<double> alpha_override;
  std::optional<double> beta_override;
  int max_iter = 60;

  // stability experiment
  double shock_offset = 0.01;
  double bump_amplitude = 0.0;
  double windows = 6.0;
  double ibvp_cfl = 0.45;

  // crosscheck experiment
  double n_periods = 3.0;
  double fv_cfl = 0.45;
  int samples_per_period = 64;
  int snapshot_every = 16;

  std::string output_dir = "out";
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

NozzleProfile make_profile(const RunConfig& cfg);
BoundaryForcing make_forcing(const RunConfig& cfg);
FitOptions make_fit_options(const RunConfig& cfg);

/// Fits the steady background, resolving the shock-position form of the
/// target through the forward model.
SteadyTransonicSolution fit_background(const RunConfig& cfg);

ScalingConfig make_scaling(const RunConfig& cfg,
                           const SteadyTransonicSolution& bg);

}  // namespace tpshock
