"""Even polynomial and factored potentials, and their critical-point structure."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import kernels
from .roots import RootFindingFailure, evaluate, real_roots, to_fractions

__all__ = [
    "PotentialError",
    "NonPolynomial",
    "RootFindingFailure",
    "PolynomialPotential",
    "FactoredPotential",
    "AlphaForm",
    "CriticalPoint",
    "CriticalPointSet",
    "CheckResult",
    "default_tol",
    "expand_factored",
    "classify_critical_points",
    "check_phi8_first_order",
    "phi8_ratio_window",
    "phi10_alpha_map",
    "phi10_constraint_terms",
    "phi10_four_degenerate_constraint",
    "phi10_constraint_scale",
    "scan_phase",
    "phi8_scan_template",
    "phi10_scan_template",
    "potential_from_json",
    "EXAMPLE_POTENTIALS",
    "example_potential",
]


class PotentialError(ValueError):
    pass


class NonPolynomial(PotentialError):
    pass


def default_tol() -> float:
    """Global tolerance, overridable through KINKFORGE_TOL."""
    raw = os.environ.get("KINKFORGE_TOL")
    if raw:
        try:
            val = float(raw)
        except ValueError:
            raise PotentialError(f"KINKFORGE_TOL is not a number: {raw!r}")
        if val > 0:
            return val
    return 1e-9


def _as_array(phi):
    return np.atleast_1d(np.asarray(phi, dtype=float))


def _shape_like(phi, out):
    return out[0] if np.ndim(phi) == 0 else out.reshape(np.shape(phi))


@dataclass(frozen=True)
class PolynomialPotential:
    """V(phi) = lam**2 * sum_i coeffs[i] * phi**i with only even powers."""

    coeffs: tuple
    lam: float = 1.0

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0.0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)
        if not c:
            raise PotentialError("no coefficients")
        if self.lam <= 0:
            raise PotentialError("lambda must be positive")
        if any(c[i] != 0.0 for i in range(1, len(c), 2)):
            raise PotentialError("odd coefficients must vanish")
        if c[-1] <= 0:
            raise PotentialError("leading coefficient must be positive")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def ycoef(self) -> np.ndarray:
        """Coefficients in y = phi**2."""
        return np.array(self.coeffs[::2], dtype=float)

    def __call__(self, phi):
        x = _as_array(phi).ravel()
        out = self.lam**2 * kernels.horner(np.array(self.coeffs), x)
        return _shape_like(phi, out)

    def derivative_coeffs(self, k: int = 1) -> np.ndarray:
        c = np.array(self.coeffs)
        for _ in range(k):
            c = c[1:] * np.arange(1, len(c)) if len(c) > 1 else np.zeros(1)
        return c

    def derivative(self, phi, k: int = 1):
        x = _as_array(phi).ravel()
        out = self.lam**2 * kernels.horner(self.derivative_coeffs(k), x)
        return _shape_like(phi, out)

    def d2(self, phi):
        return self.derivative(phi, 2)

    def shifted(self, delta: float) -> "PolynomialPotential":
        """Add delta (in units of lam**2) to the constant term."""
        c = list(self.coeffs)
        c[0] += delta
        return PolynomialPotential(tuple(c), self.lam)

    def min_shifted(self, tol: float | None = None) -> "PolynomialPotential":
        cps = classify_critical_points(self, tol)
        vmin = min(p.value for p in cps.points if p.kind == "minimum")
        return self.shifted(-vmin / self.lam**2)

    def kernel_args(self):
        empty = np.zeros(0)
        return self.ycoef, empty, empty, empty, False

    def to_dict(self, family: str | None = None) -> dict:
        return {"family": family or f"phi{self.degree}", "lambda": self.lam, "coeffs": list(self.coeffs)}

    def to_json(self, family: str | None = None) -> str:
        return json.dumps(self.to_dict(family))


@dataclass(frozen=True)
class FactoredPotential:
    """V(phi) = lam**2 * B(phi**2) * prod_j (phi**2 + sign_j * r_j)**e_j.

    factors holds (r, sign, exponent) with sign "minus" or "plus"; base is a
    polynomial in y = phi**2 (lowest degree first) that carries pure phi**2k
    factors and irreducible quartics such as phi**4 - d phi**2 + e.  When
    absolute is set every factor is taken in absolute value.
    """

    factors: tuple
    lam: float = 1.0
    absolute: bool = False
    base: tuple = (1.0,)

    def __post_init__(self):
        fs = []
        for r, sign, e in self.factors:
            if sign not in ("minus", "plus"):
                raise PotentialError(f"bad factor sign {sign!r}")
            if not r > 0:
                raise PotentialError("factor shifts must be positive")
            if not e > 0:
                raise PotentialError("factor exponents must be positive")
            fs.append((float(r), sign, float(e)))
        object.__setattr__(self, "factors", tuple(fs))
        object.__setattr__(self, "base", tuple(float(x) for x in self.base))
        if self.lam <= 0:
            raise PotentialError("lambda must be positive")

    @staticmethod
    def of(*factors, lam=1.0, phi2_power=0, quartic=None, absolute=False):
        """Convenience constructor: of((a**2, "minus", 2), ..., phi2_power=1)."""
        base = np.zeros(phi2_power + 1)
        base[-1] = 1.0
        if quartic is not None:
            base = np.convolve(base, np.asarray(quartic, dtype=float))
        return FactoredPotential(tuple(factors), lam, absolute, tuple(base))

    @property
    def is_polynomial(self) -> bool:
        return not self.absolute and all(float(e).is_integer() for _, _, e in self.factors)

    def kernel_args(self):
        shifts = np.array([r for r, _, _ in self.factors], dtype=float)
        signs = np.array([-1.0 if s == "minus" else 1.0 for _, s, _ in self.factors])
        exps = np.array([e for _, _, e in self.factors], dtype=float)
        return np.array(self.base), shifts, signs, exps, bool(self.absolute)

    def __call__(self, phi):
        x = _as_array(phi).ravel()
        out = self.lam**2 * kernels.factored_eval(*self.kernel_args(), x)
        return _shape_like(phi, out)

    def d2(self, phi, h: float | None = None):
        """V'' by expansion when polynomial, 4th-order central difference otherwise."""
        if self.is_polynomial:
            return expand_factored(self).d2(phi)
        x = _as_array(phi).ravel()
        h = h or 1e-3 * max(1.0, float(np.max(np.abs(x))))
        f = lambda t: self(t)
        out = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
        return _shape_like(phi, out)

    def vanishing_order(self, phi_e: float, tol: float = 1e-12):
        """(2m, k) with V ~ lam**2 * k * |phi - phi_e|**(2m) near a zero of V."""
        order = 0.0
        k = 1.0
        y = phi_e * phi_e
        scale = max(1.0, abs(y))
        base = np.array(self.base)
        # zeros of the base polynomial are only ever at y = 0 (pure phi**2k)
        if abs(phi_e) <= tol:
            j = 0
            while j < len(base) and base[j] == 0.0:
                j += 1
            order += 2 * j
            k *= base[j] if j < len(base) else 0.0
        else:
            k *= float(np.polyval(base[::-1], y))
        for r, sign, e in self.factors:
            t = y + (r if sign == "plus" else -r)
            if sign == "minus" and abs(t) <= tol * scale:
                # phi**2 - r = (phi - s)(phi + s) with s = sqrt(r)
                order += e
                k *= (2.0 * math.sqrt(r)) ** e
            else:
                k *= abs(t) ** e
        return order, k

    def to_dict(self, family: str | None = None) -> dict:
        return {
            "family": family or "factored",
            "lambda": self.lam,
            "factors": [list(f) for f in self.factors],
            "absolute": self.absolute,
            "base": list(self.base),
        }

    def to_json(self, family: str | None = None) -> str:
        return json.dumps(self.to_dict(family))


def potential_from_json(doc):
    """Inverse of to_json for both potential kinds."""
    d = json.loads(doc) if isinstance(doc, str) else dict(doc)
    lam = float(d.get("lambda", 1.0))
    if "coeffs" in d:
        return PolynomialPotential(tuple(d["coeffs"]), lam)
    if "factors" in d:
        factors = tuple((float(r), s, float(e)) for r, s, e in d["factors"])
        return FactoredPotential(factors, lam, bool(d.get("absolute", False)), tuple(d.get("base", (1.0,))))
    raise PotentialError("document has neither coeffs nor factors")


def expand_factored(f: FactoredPotential) -> PolynomialPotential:
    """Exact polynomial expansion of a factored potential."""
    if not f.is_polynomial:
        raise NonPolynomial("absolute-value or fractional-exponent factors cannot be expanded")
    y = [Fraction(c) for c in f.base]
    for r, sign, e in f.factors:
        lin = [Fraction(r) if sign == "plus" else -Fraction(r), Fraction(1)]
        for _ in range(int(e)):
            out = [Fraction(0)] * (len(y) + 1)
            for i, c in enumerate(y):
                out[i] += c * lin[0]
                out[i + 1] += c * lin[1]
            y = out
    coeffs = [0.0] * (2 * len(y) - 1)
    for i, c in enumerate(y):
        coeffs[2 * i] = float(c)
    return PolynomialPotential(tuple(coeffs), f.lam)


# -- AlphaForm ---------------------------------------------------------------

_FAMILY_DEGREE = {"phi8": 8, "phi10": 10, "phi12": 12}


def _alpha_sign(family: str, k: int) -> int:
    n = _FAMILY_DEGREE[family]
    if family == "phi12":
        return 1  # natural coefficients
    return -1 if ((n - k) // 2) % 2 else 1


@dataclass(frozen=True)
class AlphaForm:
    """Alternating-sign coefficient template with unit leading term.

    phi8:  phi^8 - a6 phi^6 + a4 phi^4 - a2 phi^2 + a0
    phi10: phi^10 - a8 phi^8 + a6 phi^6 - a4 phi^4 + a2 phi^2 - a0
    phi12: natural signs, phi^12 + a10 phi^10 + ... + a0
    """

    family: str
    alphas: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _FAMILY_DEGREE:
            raise PotentialError(f"unknown family {self.family!r}")
        n = _FAMILY_DEGREE[self.family]
        full = {}
        for k in range(0, n, 2):
            full[f"alpha{k}"] = float(self.alphas.get(f"alpha{k}", 0.0))
        extra = set(self.alphas) - set(full)
        if extra:
            raise PotentialError(f"unexpected coefficients {sorted(extra)}")
        object.__setattr__(self, "alphas", full)

    def with_alpha(self, name: str, value: float) -> "AlphaForm":
        d = dict(self.alphas)
        d[name] = value
        return AlphaForm(self.family, d)

    def to_polynomial(self, lam: float = 1.0) -> PolynomialPotential:
        n = _FAMILY_DEGREE[self.family]
        c = [0.0] * (n + 1)
        c[n] = 1.0
        for k in range(0, n, 2):
            c[k] = _alpha_sign(self.family, k) * self.alphas[f"alpha{k}"]
        return PolynomialPotential(tuple(c), lam)

    @staticmethod
    def from_polynomial(p: PolynomialPotential, family: str) -> "AlphaForm":
        n = _FAMILY_DEGREE[family]
        if p.degree != n or p.coeffs[n] != 1.0:
            raise PotentialError(f"{family} template needs degree {n} with unit leading coefficient")
        return AlphaForm(family, {f"alpha{k}": _alpha_sign(family, k) * p.coeffs[k] for k in range(0, n, 2)})


# -- critical points ---------------------------------------------------------


class CriticalPoint(NamedTuple):
    location: float
    kind: str  # minimum | maximum | inflection
    value: float
    degenerate: bool


@dataclass(frozen=True)
class CriticalPointSet:
    points: tuple

    def of_kind(self, kind: str):
        return [p for p in self.points if p.kind == kind]

    @property
    def minima(self):
        return self.of_kind("minimum")

    @property
    def maxima(self):
        return self.of_kind("maximum")

    @property
    def inflections(self):
        return self.of_kind("inflection")

    @property
    def degenerate_minima(self):
        return [p for p in self.points if p.degenerate]

    def csv_rows(self):
        yield ("phi_e", "kind", "value", "degenerate")
        for p in self.points:
            yield (repr(p.location), p.kind, repr(p.value), str(p.degenerate).lower())


def _dV_sign(dq, phi: Fraction) -> int:
    # V'(phi) = phi * Q(phi^2)
    v = phi * evaluate(dq, phi * phi)
    return (v > 0) - (v < 0)


def classify_critical_points(p: PolynomialPotential, tol: float | None = None) -> CriticalPointSet:
    """All real critical points of an even polynomial potential.

    Roots of V' are isolated exactly (Sturm sequences on the rational
    coefficients).  A root is a minimum or maximum when V' changes sign across
    it and an inflection otherwise.
    """
    if p.degree < 4:
        raise PotentialError("degree must be at least 4")
    tol = default_tol() if tol is None else tol
    c = to_fractions(p.coeffs)
    # Q(y) with V'/lam^2 = phi * Q(phi^2)
    dq = [2 * (k + 1) * c[2 * k + 2] for k in range((len(c) - 1) // 2)]
    locs = [0.0]
    for y, _ in real_roots(dq):
        if y > 0:
            s = math.sqrt(y)
            locs.extend([-s, s])
    locs = sorted(set(locs))
    probes = [Fraction(locs[0]) - 1] + [
        (Fraction(u) + Fraction(v)) / 2 for u, v in zip(locs, locs[1:])
    ] + [Fraction(locs[-1]) + 1]
    signs = [_dV_sign(dq, q) for q in probes]
    vals = [float(v) for v in p(np.array(locs))]
    scale = p.lam**2 * max(1.0, max(abs(v) for v in vals) / p.lam**2)
    kinds = []
    for i in range(len(locs)):
        left, right = signs[i], signs[i + 1]
        if left < 0 < right:
            kinds.append("minimum")
        elif left > 0 > right:
            kinds.append("maximum")
        else:
            kinds.append("inflection")
    mins = [v for v, k in zip(vals, kinds) if k == "minimum"]
    vmin = min(mins) if mins else None
    pts = tuple(
        CriticalPoint(x, k, v, k == "minimum" and abs(v - vmin) <= tol * scale)
        for x, k, v in zip(locs, kinds, vals)
    )
    return CriticalPointSet(pts)


class CheckResult(NamedTuple):
    ok: bool
    residual: float


def check_phi8_first_order(alpha6: float, alpha4: float, alpha2: float, tol: float | None = None) -> CheckResult:
    """Four-degenerate-minima relation alpha4 = alpha6^2/4 + 2 alpha2/alpha6."""
    if alpha6 <= 0:
        raise PotentialError("alpha6 must be positive")
    tol = default_tol() if tol is None else tol
    res = alpha4 - alpha6**2 / 4 - 2 * alpha2 / alpha6
    return CheckResult(abs(res) <= tol * max(1.0, abs(alpha4)), res)


def phi8_ratio_window(alpha6: float, alpha4: float, tol: float = 0.0) -> str:
    """Classify alpha4/alpha6^2 against 1/4, 9/32 and 3/8."""
    if alpha6 <= 0:
        raise PotentialError("alpha6 must be positive")
    r = Fraction(alpha4) / Fraction(alpha6) ** 2
    if abs(r - Fraction(9, 32)) <= tol:
        return "inflection_boundary"
    if r <= Fraction(1, 4):
        return "below"
    if r < Fraction(9, 32):
        return "local_minima_persist"
    if r < Fraction(3, 8):
        return "minima_vanish_early"
    return "above"


def phi10_alpha_map(a: float, b: float, c: float) -> dict:
    """alpha coefficients of lam^2 (phi^2+c^2)(phi^2-a^2)^2(phi^2-b^2)^2."""
    A, B, C = a * a, b * b, c * c
    return {
        "alpha8": 2 * (B + A) - C,
        "alpha6": A * A + B * B + 4 * A * B - 2 * C * (B + A),
        "alpha4": 2 * A * B * (B + A) - C * (A * A + 4 * A * B + B * B),
        "alpha2": A * A * B * B - 2 * A * B * C * (B + A),
        "alpha0": -A * A * B * B * C,
    }


def phi10_constraint_terms(a8: float, a6: float, a4: float, a2: float):
    """The four groups of the constraint, arranged as LHS - RHS = sum(terms)."""
    t1 = 8000 * a2**3
    t2 = (27 * a4**2 + 4 * a6**3 - 18 * a4 * a6 * a8 - a6**2 * a8**2 + 4 * a4 * a8**3) * (
        25 * a4**2 - 20 * a6**3 - 70 * a4 * a6 * a8 + 37 * a6**2 * a8**2 + 4 * a4 * a8**3 - 8 * a6 * a8**4
    )
    t3 = 8 * a2 * (
        15 * a4**2 * (15 * a6 + 26 * a8**2)
        + 2 * a4 * (125 * a6**2 * a8 - 262 * a6 * a8**3 + 56 * a8**5)
        + (4 * a6 - a8**2) * (35 * a6**3 - 66 * a6**2 * a8**2 + 48 * a6 * a8**4 - 8 * a8**6)
    )
    t4 = -16 * a2**2 * (325 * a6**2 + 600 * a4 * a8 - 440 * a6 * a8**2 + 88 * a8**4)
    return t1, t2, t3, t4


def phi10_four_degenerate_constraint(a8: float, a6: float, a4: float, a2: float) -> float:
    return float(sum(phi10_constraint_terms(a8, a6, a4, a2)))


def phi10_constraint_scale(a8: float, a6: float, a4: float, a2: float) -> float:
    """Sum of absolute group magnitudes; the natural rounding scale of the residual."""
    return float(max(1e-300, sum(abs(t) for t in phi10_constraint_terms(a8, a6, a4, a2))))


def scan_phase(template: AlphaForm, free: str, grid, lam: float = 1.0, tol: float | None = None):
    """Classify the template once per value of the free coefficient."""
    grid = list(grid)
    if not grid:
        raise PotentialError("grid must be nonempty")
    return [classify_critical_points(template.with_alpha(free, g).to_polynomial(lam), tol) for g in grid]


def phi8_scan_template() -> AlphaForm:
    """phi^8 - 4 phi^6 + 9/2 phi^4 - alpha2 phi^2 + 1/16."""
    return AlphaForm("phi8", {"alpha6": 4.0, "alpha4": 4.5, "alpha2": 1.0, "alpha0": 1.0 / 16})


def phi10_scan_template() -> AlphaForm:
    """phi^10 - 5.75 phi^8 + 11.5 phi^6 - 8.75 phi^4 + alpha2 phi^2 + 1."""
    return AlphaForm("phi10", {"alpha8": 5.75, "alpha6": 11.5, "alpha4": 8.75, "alpha2": 1.0, "alpha0": -1.0})


# factored examples away from the degenerate points, solved numerically with phi(0) = 0
EXAMPLE_POTENTIALS = {
    "phi8.above": dict(factors=((1 / 8, "minus", 2),), quartic=(227 / 64, -15 / 4, 1.0)),
    "phi8.below": dict(factors=((15 / 8, "minus", 2),), quartic=(3 / 64, -1 / 4, 1.0)),
    "phi10.between": dict(factors=((0.9, "minus", 2), (0.2, "plus", 1)), quartic=(4.45, -4.15, 1.0)),
    "phi10.below": dict(factors=((2.05, "minus", 2), (0.3, "plus", 1)), quartic=(1.15, -1.97, 1.0)),
}


def example_potential(name: str, lam: float = 1.0) -> FactoredPotential:
    try:
        spec = EXAMPLE_POTENTIALS[name]
    except KeyError:
        raise PotentialError(f"unknown example {name!r}; choose from {sorted(EXAMPLE_POTENTIALS)}") from None
    return FactoredPotential.of(*spec["factors"], lam=lam, quartic=spec["quartic"])
