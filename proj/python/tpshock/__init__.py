"""Time-periodic transonic shock laboratory for quasi-1D isothermal nozzle flow.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import (  # noqa: F401
    AssumptionReport,
    BoundaryForcing,
    CrosscheckReport,
    EstimateReport,
    FitOptions,
    ForcedScalarODE,
    GasState,
    IterationOptions,
    IterationReport,
    LinearizationCoeffs,
    NozzleProfile,
    PeriodicOrbit,
    Regime,
    RiemannPair,
    ScalingConfig,
    SteadyTransonicSolution,
    SupersonicPeriodicField,
    TimePeriodicTransonicSolution,
    classify,
    compare_periodic,
    crosscheck,
    eigenvalues,
    eval_F,
    eval_G,
    exit_density_for_shock_at,
    find_periodic,
    fit_transonic,
    from_riemann,
    lax_admissible,
    linearization,
    rh_jump_moving,
    run_periodic,
    scale_phi,
    scaling_config,
    shock_speed_from_states,
    stream,
    to_riemann,
    unscale_phi,
    validate_assumptions,
    verify_estimates,
)

__all__ = [name for name in dir() if not name.startswith("_")]
