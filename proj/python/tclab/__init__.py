"""Time-changed Brownian motion: samplers, limit processes and convergence checks."""

from ._core import (
    ConfigInvalid,
    DegenerateFunctional,
    EtaConvention,
    HorizonExceeded,
    IntensityModel,
    KindMismatch,
    LengthMismatch,
    LimitSpec,
    NonIntegrableSingularity,
    Regime,
    RegimeMismatch,
    TclabError,
    additive_functional,
    cauchy_estimate,
    convergence_report,
    describe_preset,
    dkw_threshold,
    functional_via_localtime,
    integral_gaps,
    ito_residual_rms,
    ks_two_sample,
    list_presets,
    normalized_process,
    nu,
    occupation_density,
    reciprocal_integral,
    run_report,
    sample_brownian,
    sample_limit_sde,
    sample_limit_timechange,
    time_changed,
)

__all__ = [name for name in dir() if not name.startswith("_")]
