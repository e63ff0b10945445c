"""Finite-size area-law certificates from exact spectra and heat-capacity data."""

from ._core import (
    Spectrum,
    UnsatisfiableError,
    __version__,
    certify_from_data,
    fit,
    pepo_eta,
    prop1_constant,
    run_config,
)

__all__ = [
    "Spectrum",
    "UnsatisfiableError",
    "__version__",
    "certify_from_data",
    "fit",
    "pepo_eta",
    "prop1_constant",
    "run_config",
]
