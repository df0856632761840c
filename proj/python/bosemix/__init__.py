"""Energetics of dilute two-component Bose gases."""

from ._core import (
    LHY_CONSTANT,
    AdmissibilityError,
    ConsistencyError,
    DomainError,
    Error,
    MiscibilityError,
    NumericalError,
    ParameterError,
    RegimeError,
    ValidationError,
    convexity_scan,
    energy,
    i_ab_from_mu,
    i_ab_quadrature,
    minimize_mode,
    mu_pm,
    run_cli,
    scatter,
    scattering_length,
    sum_vs_integral,
    xi,
)

__all__ = [name for name in dir() if not name.startswith("_")]
