"""Kink solutions and their small-oscillation spectra in phi^8 to phi^12 field theories."""
from . import catalog, limits, numeric, phonons, potential, qes, verify
from ._accel import HAVE_NUMBA, backend
from .catalog import Params, get_case, list_cases
from .numeric import integrate_bps, invert_implicit, inverted_profile, quadrature_energy

__version__ = "0.1.0"

__all__ = [
    "catalog",
    "limits",
    "numeric",
    "phonons",
    "potential",
    "qes",
    "verify",
    "HAVE_NUMBA",
    "backend",
    "Params",
    "get_case",
    "list_cases",
    "integrate_bps",
    "invert_implicit",
    "inverted_profile",
    "quadrature_energy",
]
