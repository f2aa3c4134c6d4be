"""Truncated cosine series and their sine-Gordon limit kinks."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import kernels
from .potential import PolynomialPotential, classify_critical_points

__all__ = [
    "LimitFamily",
    "truncated_potential",
    "limit_family",
    "limit_kink",
    "limit_potential",
    "convergence_metric",
    "equivalence_gap",
    "ConvergenceResult",
]

PARITIES = ("even_4n", "odd_4n2")


def _parity(parity: str) -> str:
    aliases = {"even": "even_4n", "odd": "odd_4n2"}
    parity = aliases.get(parity, parity)
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}")
    return parity


class LimitFamily(NamedTuple):
    parity: str
    n: int
    potential: PolynomialPotential

    @property
    def order(self) -> int:
        return self.potential.degree


def truncated_potential(parity: str, n: int, lam: float = 1.0) -> PolynomialPotential:
    """V_2m = lam^2 sum_i (-1)^(m-i) alpha_2i phi^2i, alpha_2i = 1/(2i)!, m = 2n or 2n+1.

    alpha_0 is 2 for the even family and 0 for the odd one; no leading
    coefficient normalisation is applied.
    """
    parity = _parity(parity)
    if n < 1:
        raise ValueError("n must be at least 1")
    m = 2 * n if parity == "even_4n" else 2 * n + 1
    c = np.zeros(2 * m + 1)
    for i in range(m + 1):
        a = 1.0 / math.factorial(2 * i)
        if i == 0:
            a = 2.0 if parity == "even_4n" else 0.0
        c[2 * i] = (-1) ** (m - i) * a
    return PolynomialPotential(tuple(c), lam)


def limit_family(parity: str, n: int, lam: float = 1.0) -> LimitFamily:
    return LimitFamily(_parity(parity), n, truncated_potential(parity, n, lam))


def limit_potential(parity: str, phi, lam: float = 1.0):
    """lam^2 (1 + cos phi) for the even family, lam^2 (1 - cos phi) for the odd one."""
    s = 1.0 if _parity(parity) == "even_4n" else -1.0
    return lam**2 * (1.0 + s * np.cos(np.asarray(phi, dtype=float)))


def limit_kink(parity: str, lam: float, x):
    x = np.asarray(x, dtype=float)
    if _parity(parity) == "even_4n":
        return 4.0 * np.arctan(np.tanh(lam * x / 2.0))
    return 4.0 * np.arctan(np.exp(lam * x))


def equivalence_gap(x, lam: float = 1.0) -> float:
    """max |tan((phi - pi)/4) - (tan(phi/4) - 1)/(1 + tan(phi/4))| along the odd limit kink."""
    x = np.asarray(x, dtype=float)
    po = limit_kink("odd", lam, x)
    t = np.tan(po / 4.0)
    lhs = np.tan((po - math.pi) / 4.0)
    rhs = (t - 1.0) / (1.0 + t)
    return float(np.max(np.abs(lhs - rhs)))


class ConvergenceResult(NamedTuple):
    gap: float
    interval: tuple
    x: np.ndarray
    phi: np.ndarray


def _interval(pot: PolynomialPotential, parity: str):
    cps = classify_critical_points(pot)
    pos = [c.location for c in cps.minima if c.location > 1e-9]
    if parity == "odd_4n2":
        # nearest truncated minimum past the centre, else the cosine value
        hi = pos[0] if pos and pos[0] < 2 * math.pi + 1 else 2 * math.pi
        return 0.0, hi, math.pi
    hi = pos[0] if pos and pos[0] < math.pi + 1 else math.pi
    return -hi, hi, 0.0


def convergence_metric(parity: str, n: int, lam: float = 1.0, x_max: float = 5.0, npts: int = 2001,
                       full: bool = False):
    """Sup-norm gap between the truncated-potential kink and the limit kink on [-x_max, x_max] (in units of 1/lam).

    The truncated kink is integrated from the cosine centre (pi for the odd
    family, 0 for the even one) in both directions.  The truncated potential
    need not be degenerate, so slopes are clipped at V = 0 and the profile
    saturates at the end of the interval.
    """
    parity = _parity(parity)
    pot = truncated_potential(parity, n, lam)
    lo, hi, centre = _interval(pot, parity)
    half = np.linspace(0.0, x_max / lam, npts // 2 + 1)[1:]
    x = np.concatenate((-half[::-1], [0.0], half))
    args = pot.kernel_args()
    phi = np.empty_like(x)
    for d, sel in ((1.0, x >= 0), (-1.0, x <= 0)):
        s = np.abs(x[sel])
        order = np.argsort(s)
        s_sorted = s[order]
        out, k, status = kernels.bps_dp45(*args, lam**2, lo, hi, centre, s_sorted, d, 1e-11, 1e-13,
                                          1e-12 * (hi - lo), math.inf, 200000)
        if status != kernels.STATUS_OK:
            raise RuntimeError(f"integration failed with status {status}")
        vals = np.full(s_sorted.shape, hi if d > 0 else lo)
        vals[:k] = out[:k]
        seg = np.empty_like(vals)
        seg[order] = vals
        phi[sel] = seg
    gap = float(np.max(np.abs(phi - limit_kink(parity, lam, x))))
    if full:
        return ConvergenceResult(gap, (lo, hi), x, phi)
    return gap
