"""Secure hybrid digital-analog transmission of a Gaussian source over a Gaussian wiretap
channel with side information at the legitimate receiver."""

from .model import (
    MismatchPoint,
    SchemeKind,
    SystemParams,
    ValidatedParams,
    fig4_params,
    load_config,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "MismatchPoint",
    "SchemeKind",
    "SystemParams",
    "ValidatedParams",
    "fig4_params",
    "load_config",
    "validate",
]
