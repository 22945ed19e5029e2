"""Pseudo-spectral 2D Navier-Stokes with feedback-nudging data assimilation."""

from ._nsnudge import (  # noqa: F401
    BlowUpError,
    GridSpec,
    InterpolantKind,
    InterpolantSpec,
    NsnudgeValidationError,
    VelocityField,
    bilinear,
    certify_c0,
    default_config_json,
    fit_decay_rate,
    inner_l2,
    integrate,
    interp_apply,
    leray_project,
    max_divergence,
    minlog_lower_bound,
    minlog_phi,
    norms,
    observe,
    prediction_experiment,
    random_divfree_field,
    run_pair,
    simulate_to_directory,
    stokes_apply,
    taylor_green,
    thresholds,
    to_real,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
