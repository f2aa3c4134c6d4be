"""Numeric engines: implicit inversion, BPS integration, quadrature, tail fits.

These are deliberately independent of one another so that each can act as an
oracle for the catalog and for the others.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from . import kernels
from .catalog import KinkCase, Params, TailAsymptote, get_case, tail as catalog_tail
from .potential import (
    FactoredPotential,
    PolynomialPotential,
    classify_critical_points,
    default_tol,
    expand_factored,
)

__all__ = [
    "NumericError",
    "Clamped",
    "NegativePotential",
    "StiffnessAbort",
    "InsufficientTail",
    "KinkProfile",
    "BoostedProfile",
    "Inversion",
    "TailFit",
    "invert_implicit",
    "inverted_profile",
    "integrate_bps",
    "adjacent_minima",
    "quadrature_energy",
    "fit_tail",
    "boost",
    "antikink",
    "tail_window",
]


class NumericError(RuntimeError):
    pass


class Clamped(NumericError):
    pass


class NegativePotential(NumericError):
    pass


class StiffnessAbort(NumericError):
    pass


class InsufficientTail(NumericError):
    pass


@dataclass(frozen=True)
class KinkProfile:
    x: np.ndarray
    phi: np.ndarray
    minima: tuple
    anchor: str = "implicit_x0"  # or "midpoint_zero"
    provenance: str = "inverted"  # or "integrated"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if x.shape != phi.shape or x.ndim != 1:
            raise NumericError("x and phi must be 1-d arrays of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "phi", phi)

    def __len__(self):
        return len(self.x)

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.phi.tolist()))

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.x) > 0) and np.all(np.diff(self.phi) >= 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "phi"])
        for xv, pv in zip(self.x, self.phi):
            w.writerow([repr(float(xv)), repr(float(pv))])
        return buf.getvalue()

    def to_json(self) -> str:
        meta = {k: v for k, v in self.meta.items() if isinstance(v, (str, int, float, bool, list, dict, type(None)))}
        return json.dumps({
            "minima": list(self.minima),
            "anchor": self.anchor,
            "provenance": self.provenance,
            "meta": meta,
            "x": self.x.tolist(),
            "phi": self.phi.tolist(),
        })


@dataclass(frozen=True)
class BoostedProfile:
    base: KinkProfile
    velocity: float
    x0: float = 0.0

    def __post_init__(self):
        if not abs(self.velocity) < 1:
            raise NumericError("|v| must be below 1")

    def at(self, x, t: float = 0.0):
        g = 1.0 / math.sqrt(1.0 - self.velocity**2)
        xi = (np.asarray(x, dtype=float) - self.x0 - self.velocity * t) * g
        return np.interp(xi, self.base.x, self.base.phi)

    def sample(self, t: float = 0.0) -> KinkProfile:
        return KinkProfile(self.base.x.copy(), self.at(self.base.x, t), self.base.minima, self.base.anchor,
                           self.base.provenance, {**self.base.meta, "velocity": self.velocity, "x0": self.x0, "t": t})


# ------------------------------------------------------------ inversion ----

def _ordered(f):
    # float -> int64 key with the same ordering (adjacent floats differ by 1)
    b = np.asarray(f, dtype=np.float64).view(np.int64)
    return np.where(b < 0, -(b & np.int64(0x7FFFFFFFFFFFFFFF)), b)


def _unordered(k):
    k = np.asarray(k, dtype=np.int64)
    b = np.where(k < 0, (-k) | np.int64(-0x8000000000000000), k)
    return b.view(np.float64)


class Inversion(NamedTuple):
    phi: np.ndarray
    clamped: np.ndarray  # True where phi was pinned to a minimum
    residual: np.ndarray
    spread: np.ndarray  # |F| change across the final one-ulp bracket


def invert_implicit(case, x, p: Params | None = None, strict: bool = False) -> Inversion:
    """Solve F(phi) = mu*x for phi on the open interval between the minima.

    Bisection runs on the integer image of the doubles, so it always ends on
    a pair of adjacent floats.  Points whose root lies closer to a minimum
    than the nearest representable double are clamped to the minimum.
    """
    case = get_case(case) if isinstance(case, str) else case
    p = case.validate(p if p is not None else case.params())
    lo, hi = case.minima(p)
    mu = case.mu(p)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    target = mu * xs
    F = lambda f: case.relation(f, p)
    l0 = np.nextafter(lo, hi)
    h0 = np.nextafter(hi, lo)
    with np.errstate(all="ignore"):
        fl, fh = F(np.array([l0]))[0], F(np.array([h0]))[0]
        below = ~(target > fl)  # root sits in the last ulp next to lo
        above = ~(target < fh)
        kl = np.full(xs.shape, _ordered(l0), dtype=np.int64)
        kh = np.full(xs.shape, _ordered(h0), dtype=np.int64)
        active = ~(below | above)
        for _ in range(80):
            if not np.any(active):
                break
            km = kl // 2 + kh // 2 + ((kl % 2 + kh % 2) // 2)
            fm = F(_unordered(km))
            go_up = fm < target
            kl = np.where(active & go_up, km, kl)
            kh = np.where(active & ~go_up, km, kh)
            active &= (kh - kl) > 1
        pl, ph = _unordered(kl), _unordered(kh)
        rl, rh = F(pl) - target, F(ph) - target
        phi = np.where(np.abs(rl) <= np.abs(rh), pl, ph)
        res = np.where(np.abs(rl) <= np.abs(rh), rl, rh)
        spread = np.abs(rh - rl)
    phi = np.where(below, lo, np.where(above, hi, phi))
    res = np.where(below | above, np.nan, res)
    spread = np.where(below | above, np.nan, spread)
    clamped = below | above
    if strict and np.any(clamped):
        raise Clamped(f"{int(clamped.sum())} point(s) lie beyond double resolution of a minimum")
    if np.ndim(x) == 0:
        return Inversion(phi[0], clamped[0], res[0], spread[0])
    return Inversion(phi, clamped, res, spread)


def inverted_profile(case, x, p: Params | None = None) -> KinkProfile:
    case = get_case(case) if isinstance(case, str) else case
    p = case.validate(p if p is not None else case.params())
    inv = invert_implicit(case, x, p)
    anchor = "midpoint_zero" if case.symmetric else "implicit_x0"
    return KinkProfile(np.asarray(x, dtype=float), inv.phi, case.minima(p), anchor, "inverted",
                       {"case": case.id, "clamped": int(np.sum(inv.clamped))})


# ---------------------------------------------------------- integration ----

def adjacent_minima(pot, phi0: float, tol: float | None = None):
    """The zeros of V nearest to phi0 on either side."""
    tol = default_tol() if tol is None else tol
    if isinstance(pot, FactoredPotential):
        cands = {0.0} if pot.base and pot.base[0] == 0.0 else set()
        for r, sign, _ in pot.factors:
            if sign == "minus":
                s = math.sqrt(r)
                cands.update((-s, s))
        if pot.is_polynomial:
            cands.update(_poly_zeros(expand_factored(pot), tol))
    else:
        cands = set(_poly_zeros(pot, tol))
    below = [c for c in cands if c < phi0]
    above = [c for c in cands if c > phi0]
    if not below or not above:
        raise NumericError(f"phi0={phi0} is not between two zeros of V")
    return max(below), min(above)


def _poly_zeros(p: PolynomialPotential, tol):
    cps = classify_critical_points(p, tol)
    scale = p.lam**2 * max(1.0, max(abs(c.value) for c in cps.points) / p.lam**2)
    return [c.location for c in cps.points if c.kind == "minimum" and abs(c.value) <= tol * scale]


_STATUS_ERR = {
    kernels.STATUS_NEGATIVE: NegativePotential,
    kernels.STATUS_UNDERFLOW: StiffnessAbort,
    kernels.STATUS_MAXSTEPS: StiffnessAbort,
}


def integrate_bps(pot, x, x0: float = 0.0, phi0: float = 0.0, minima=None, rtol: float = 1e-12,
                  atol: float | None = None, stop_tol: float | None = None, max_steps: int = 200000) -> KinkProfile:
    """Solve d(phi)/dx = sqrt(2V) outward from (x0, phi0) onto the grid x.

    The grid must contain x0.  Integration stops on each side once phi is
    within stop_tol of the minimum; only the filled samples are returned.
    """
    xs = np.asarray(x, dtype=float)
    if np.any(np.diff(xs) <= 0):
        raise NumericError("x grid must be strictly increasing")
    lo, hi = minima if minima is not None else adjacent_minima(pot, phi0)
    if not lo < phi0 < hi:
        raise NumericError("phi0 must lie strictly between the minima")
    v0 = float(pot(phi0))
    if not v0 > 0:
        raise NegativePotential(f"V(phi0) = {v0} is not positive")
    width = hi - lo
    atol = 1e-15 * width if atol is None else atol
    stop_tol = 1e-12 * width if stop_tol is None else stop_tol
    neg_tol = 1e-12 * pot.lam**2
    args = pot.kernel_args()
    lam2 = pot.lam**2
    right = xs[xs >= x0] - x0
    left = (x0 - xs[xs <= x0])[::-1]
    if right.size == 0 or right[0] != 0.0:
        right = np.concatenate(([0.0], right))
        rdrop = 1
    else:
        rdrop = 0
    if left.size == 0 or left[0] != 0.0:
        left = np.concatenate(([0.0], left))
        ldrop = 1
    else:
        ldrop = 0
    outs = []
    for s_out, d in ((right, 1.0), (left, -1.0)):
        out, n, status = kernels.bps_dp45(*args, lam2, lo, hi, phi0, s_out, d, rtol, atol, stop_tol, neg_tol, max_steps)
        if status != kernels.STATUS_OK:
            raise _STATUS_ERR[status](f"BPS integration failed with status {status}")
        outs.append((s_out[:n], out[:n]))
    (sr, pr), (sl, pl) = outs
    xr = x0 + sr[rdrop:]
    yr = pr[rdrop:]
    xl = (x0 - sl[ldrop:])[::-1]
    yl = pl[ldrop:][::-1]
    if ldrop == 0 and rdrop == 0:
        xl, yl = xl[:-1], yl[:-1]  # x0 appears in both halves
    xo = np.concatenate((xl, xr))
    yo = np.concatenate((yl, yr))
    anchor = "midpoint_zero" if phi0 == 0.0 and x0 == 0.0 else "implicit_x0"
    return KinkProfile(xo, yo, (lo, hi), anchor, "integrated", {"x0": x0, "phi0": phi0})


# ------------------------------------------------------------ quadrature ----

class Quadrature(NamedTuple):
    value: float
    abserr: float


def quadrature_energy(pot, phi_lo: float, phi_hi: float, tol: float = 1e-12, with_error: bool = False):
    """E = int sqrt(2V) d(phi) between two zeros of V.

    sqrt(2V) vanishes at both ends like a power of the distance, so break
    points are placed geometrically toward each end before handing the
    pieces to adaptive Gauss-Kronrod.
    """
    if phi_hi < phi_lo:
        phi_lo, phi_hi = phi_hi, phi_lo
    w = phi_hi - phi_lo
    if w == 0:
        return Quadrature(0.0, 0.0) if with_error else 0.0
    probe = np.linspace(phi_lo, phi_hi, 2001)
    vp = pot(probe)
    scale = max(float(np.max(np.abs(vp))), pot.lam**2 * 1e-300)
    if np.min(vp) < -1e-12 * scale:
        raise NegativePotential(f"V < 0 on [{phi_lo}, {phi_hi}] (min {np.min(vp):.3e})")

    def g(t):
        v = float(pot(t))
        return math.sqrt(2.0 * v) if v > 0 else 0.0

    fr = np.array([1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1 - 1e-4, 1 - 1e-6])
    nodes = np.concatenate(([phi_lo], phi_lo + w * fr, [phi_hi]))
    total, err = 0.0, 0.0
    for u, v in zip(nodes, nodes[1:]):
        val, e = quad(g, u, v, epsabs=tol * 1e-3, epsrel=tol, limit=200)
        total += val
        err += e
    return Quadrature(total, err) if with_error else total


# -------------------------------------------------------------- tail fits ----

class TailFit(NamedTuple):
    side: str
    kind: str
    rate: float | None
    exponent: float | None
    prefactor: float
    approach_value: float
    r2: float
    r2_other: float
    n: int

    def asymptote(self) -> TailAsymptote:
        return TailAsymptote(self.side, self.kind, self.rate, self.exponent, self.prefactor, self.approach_value)


def _linfit(u, v):
    A = np.vstack([u, np.ones_like(u)]).T
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    pred = A @ coef
    ss = float(np.sum((v - pred) ** 2))
    tot = float(np.sum((v - v.mean()) ** 2))
    return coef, (1.0 - ss / tot if tot > 0 else 1.0), ss


def fit_tail(profile: KinkProfile, side: str, window=(0.6, 0.9), min_points: int = 20) -> TailFit:
    """Classify one tail as exponential or algebraic.

    ln|phi - phi_e| is regressed on |x| and on ln|x| over the window; the
    model with the smaller residual wins.
    """
    if side not in ("minus", "plus"):
        raise NumericError("side must be 'minus' or 'plus'")
    lo, hi = profile.minima
    phi_e = hi if side == "plus" else lo
    sel = profile.x > 0 if side == "plus" else profile.x < 0
    xs = np.abs(profile.x[sel])
    if xs.size == 0:
        raise InsufficientTail("no samples on that side")
    X = xs.max()
    d = np.abs(profile.phi[sel] - phi_e)
    m = (xs >= window[0] * X) & (xs <= window[1] * X) & (d > 0)
    if "clamped" in profile.meta:
        m &= (profile.phi[sel] != lo) & (profile.phi[sel] != hi)
    if int(m.sum()) < min_points:
        raise InsufficientTail(f"only {int(m.sum())} usable samples in the tail window")
    u, ld = xs[m], np.log(d[m])
    (se, ie), r2e, sse = _linfit(u, ld)
    (sa, ia), r2a, ssa = _linfit(np.log(u), ld)
    sign = -1.0 if side == "plus" else 1.0
    if sse <= ssa:
        return TailFit(side, "exponential", -se, None, sign * math.exp(ie), phi_e, r2e, r2a, int(m.sum()))
    return TailFit(side, "algebraic", None, -sa, sign * math.exp(ia), phi_e, r2a, r2e, int(m.sum()))


def tail_window(case: KinkCase, p: Params | None = None, reach: float = 1e-8, alg_reach: float = 1e-4,
                alg_cap: float = 1e8):
    """Per-side |x| extents at which the catalogued tails are within reach*width of the minima.

    Algebraic tails use the looser alg_reach and are capped at alg_cap/mu.
    """
    p = case.validate(p if p is not None else case.params())
    lo, hi = case.minima(p)
    w = hi - lo
    out = []
    for side in ("minus", "plus"):
        t = catalog_tail(case, side, p)
        if t.kind == "exponential":
            out.append(max(1.0 / t.rate, math.log(abs(t.prefactor) / (reach * w)) / t.rate))
        else:
            out.append(min((abs(t.prefactor) / (alg_reach * w)) ** (1.0 / t.exponent), alg_cap / case.mu(p)))
    return tuple(out)


# -------------------------------------------------------- transformations ----

def boost(profile: KinkProfile, v: float, x0: float = 0.0) -> BoostedProfile:
    return BoostedProfile(profile, float(v), float(x0))


def antikink(profile: KinkProfile) -> KinkProfile:
    """Apply {x, phi} -> -{x, phi}; samples are re-sorted so x ascends."""
    lo, hi = profile.minima
    return KinkProfile(-profile.x[::-1], -profile.phi[::-1], (-hi, -lo), profile.anchor, profile.provenance,
                       {**profile.meta, "antikink": not profile.meta.get("antikink", False)})
