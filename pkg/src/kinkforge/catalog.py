"""Registry of closed-form implicit kinks.

Every entry is data: a factored potential, the connected minima, the rate
constant mu, the implicit relation F(phi) = mu*x, the closed-form energy and
the per-side tail rate.  Relations are stored in log form so that exp-form
solutions never overflow.  All closures take a Params namespace.

Where the printed relation or energy carries a typo the registry holds the
corrected expression; ``corrections`` on each case says what changed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .potential import FactoredPotential

__all__ = [
    "CatalogError",
    "DomainError",
    "ConstraintViolation",
    "NoSignChange",
    "Params",
    "TailAsymptote",
    "KinkCase",
    "list_cases",
    "get_case",
    "implicit_residual",
    "closed_form_energy",
    "tail",
    "energy_crossover",
    "catalog_json",
    "reference_map",
]

SQ2 = math.sqrt(2.0)
ln = np.log
ash = np.arcsinh
atan = np.arctan


class CatalogError(ValueError):
    pass


class DomainError(CatalogError):
    pass


class ConstraintViolation(CatalogError):
    pass


class NoSignChange(CatalogError):
    pass


class Params(NamedTuple):
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    lam: float = 1.0


class TailAsymptote(NamedTuple):
    """phi ~ approach + prefactor * exp(-rate*|x|)  or  approach + prefactor * |x|**(-exponent)."""

    side: str  # "minus" (x -> -inf) or "plus" (x -> +inf)
    kind: str  # "exponential" | "algebraic"
    rate: float | None
    exponent: float | None
    prefactor: float
    approach_value: float


@dataclass(frozen=True)
class KinkCase:
    id: str
    family: str
    eq: str  # equation label of the implicit relation
    potential_eq: str
    energy_eq: str
    param_names: tuple
    defaults: dict
    potential: Callable  # Params -> FactoredPotential
    minima: Callable  # Params -> (lo, hi)
    mu: Callable  # Params -> float
    relation: Callable  # (phi array, Params) -> F(phi), with F = mu x on the kink
    energy: Callable  # Params -> float
    rates: tuple  # per side: callable Params -> rate, or None for algebraic tails
    constraints: Callable  # Params -> list of violated-constraint messages
    symmetric: bool = False
    relation_form: str = "log_form"
    sign_window: Callable | None = None  # informational alpha-sign window
    corrections: tuple = ()

    def params(self, **kw) -> Params:
        """Canonical figure parameters overridden by keyword arguments."""
        d = dict(self.defaults)
        d.setdefault("lam", 1.0)
        for k, v in kw.items():
            if v is None:
                continue
            if k not in self.param_names and k != "lam":
                raise CatalogError(f"{self.id} has no parameter {k!r}")
            d[k] = float(v)
        return Params(**d)

    def validate(self, p: Params) -> Params:
        bad = self.constraints(p)
        if p.lam <= 0:
            bad = list(bad) + ["lambda > 0"]
        if bad:
            raise ConstraintViolation(f"{self.id}: violated {', '.join(bad)}")
        return p

    def V(self, p: Params) -> FactoredPotential:
        return self.potential(p)

    def descriptor(self) -> dict:
        p = self.params()
        lo, hi = self.minima(p)
        return {
            "id": self.id,
            "family": self.family,
            "relation_eq": self.eq,
            "potential_eq": self.potential_eq,
            "energy_eq": self.energy_eq,
            "relation_form": self.relation_form,
            "params": {k: getattr(p, k) for k in self.param_names},
            "minima": [lo, hi],
            "mu": self.mu(p),
            "energy": self.energy(p),
            "symmetric": self.symmetric,
            "tails": [t._asdict() for t in (tail(self, "minus", p), tail(self, "plus", p))],
            "corrections": list(self.corrections),
        }


def _pos(*names):
    def check(p):
        return [f"{n} > 0" for n in names if not getattr(p, n) > 0]

    return check


def _ordered(*names):
    """Positivity of every name plus strict increase along the list."""

    def check(p):
        bad = _pos(*names)(p)
        for u, v in zip(names, names[1:]):
            if not getattr(p, u) < getattr(p, v):
                bad.append(f"{u} < {v}")
        return bad

    return check


def _both(f, g):
    return lambda p: f(p) + g(p)


def _fp(*factors, phi2=0, quartic=None, absolute=False):
    """Build a Params -> FactoredPotential closure from (name, sign, exp) triples."""

    def make(p):
        fs = [(getattr(p, n) ** 2, s, e) for n, s, e in factors]
        return FactoredPotential.of(*fs, lam=p.lam, phi2_power=phi2,
                                    quartic=None if quartic is None else quartic(p), absolute=absolute)

    return make


_REG: dict[str, KinkCase] = {}


def _add(case: KinkCase):
    if case.id in _REG:
        raise CatalogError(f"duplicate case {case.id}")
    _REG[case.id] = case


# ---------------------------------------------------------------- phi^8 ----
_A4 = {"a": (math.sqrt(3) - 1) / 2, "b": (math.sqrt(3) + 1) / 2}
_V8_4 = _fp(("a", "minus", 2), ("b", "minus", 2))
_mu8_4 = lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 - p.a**2)

_add(KinkCase(
    "phi8.4dm.inner", "phi8", "4.2", "4", "4x1", ("a", "b"), _A4, _V8_4,
    lambda p: (-p.a, p.a), _mu8_4,
    lambda f, p: ln((p.a + f) / (p.a - f)) + (p.a / p.b) * ln((p.b - f) / (p.b + f)),
    lambda p: 4 * SQ2 / 15 * p.lam * p.a**3 * (5 * p.b**2 - p.a**2),
    (_mu8_4, _mu8_4), _ordered("a", "b"), symmetric=True, relation_form="exp_form",
))
_add(KinkCase(
    "phi8.4dm.outer", "phi8", "4.2b", "4", "4.2d", ("a", "b"), _A4, _V8_4,
    lambda p: (p.a, p.b), _mu8_4,
    lambda f, p: ln((f - p.a) / (f + p.a)) + (p.a / p.b) * ln((p.b + f) / (p.b - f)),
    lambda p: 2 * SQ2 / 15 * p.lam * (p.b - p.a) ** 3 * (p.b**2 + 3 * p.a * p.b + p.a**2),
    (_mu8_4, lambda p: _mu8_4(p) * p.b / p.a), _ordered("a", "b"), relation_form="exp_form",
))

_add(KinkCase(
    "phi8.3dm.I", "phi8", "7.2", "7.1", "7.2a", ("a",), {"a": 0.75},
    _fp(("a", "minus", 2), phi2=2),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**3,
    lambda f, p: -2 * p.a / f + ln((p.a + f) / (p.a - f)),
    lambda p: 2 * SQ2 / 15 * p.lam * p.a**5,
    (None, lambda p: 2 * SQ2 * p.lam * p.a**3), _pos("a"),
))


def _s(p, f, which="b"):
    return np.sqrt(getattr(p, which) ** 2 + f * f)


def _lnq(p, f, which="b"):
    """ln((s - r)/(s + r)) with s = sqrt(r^2 + phi^2); s - r formed without cancellation."""
    r = getattr(p, which)
    s = _s(p, f, which)
    return ln(f * f / (s + r) ** 2)


_add(KinkCase(
    "phi8.3dm.II", "phi8", "7.4", "7.3", "7.4b", ("a", "b"), {"a": 0.75, "b": 1.0},
    _fp(("a", "minus", 2), ("b", "plus", 1), phi2=1),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**2 * math.hypot(p.a, p.b),
    lambda f, p: (math.hypot(p.a, p.b) / p.b) * _lnq(p, f)
    + ln((math.hypot(p.a, p.b) + _s(p, f)) / (math.hypot(p.a, p.b) - _s(p, f))),
    lambda p: SQ2 / 15 * p.lam * (2 * math.hypot(p.a, p.b) ** 5 - p.b**3 * (2 * p.b**2 + 5 * p.a**2)),
    (lambda p: SQ2 * p.lam * p.a**2 * p.b, lambda p: 2 * SQ2 * p.lam * p.a**2 * math.hypot(p.a, p.b)),
    _pos("a", "b"), sign_window=lambda p: p.b > SQ2 * p.a,
))

_add(KinkCase(
    "phi8.2dm.I", "phi8", "7.8", "7.7", "unnumbered after (7.8)", ("a",), {"a": 0.8},
    _fp(("a", "minus", 4)),
    lambda p: (-p.a, p.a), lambda p: 4 * SQ2 * p.lam * p.a**3,
    lambda f, p: 2 * p.a * f / (p.a**2 - f * f) + ln((p.a + f) / (p.a - f)),
    lambda p: 16 * SQ2 / 15 * p.lam * p.a**5,
    (None, None), _pos("a"), symmetric=True,
))
_add(KinkCase(
    "phi8.2dm.II", "phi8", "7.6", "7.5", "unnumbered after (7.6)", ("a", "b"), {"a": 0.8, "b": 1.0},
    _fp(("a", "minus", 2), ("b", "plus", 2)),
    lambda p: (-p.a, p.a), lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 + p.a**2),
    lambda f, p: (2 * p.a / p.b) * atan(f / p.b) + ln((p.a + f) / (p.a - f)),
    lambda p: 4 * SQ2 / 15 * p.lam * p.a**3 * (p.a**2 + 5 * p.b**2),
    (lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 + p.a**2),) * 2, _pos("a", "b"), symmetric=True,
    sign_window=lambda p: p.b * math.sqrt(2 - math.sqrt(3)) > p.a,
))

# --------------------------------------------------------------- phi^10 ----
_V10_5 = _fp(("a", "minus", 2), ("b", "minus", 2), phi2=1)
_mu10_5 = lambda p: 2 * SQ2 * p.lam * p.b**2 * (p.b**2 - p.a**2)
_g = lambda p: p.b**2 / p.a**2
_r10_0 = lambda p: SQ2 * p.lam * p.a**2 * p.b**2
_r10_a = lambda p: _mu10_5(p) / _g(p)

_add(KinkCase(
    "phi10.5dm.inner", "phi10", "1.15", "1.2", "1.15e", ("a", "b"), {"a": 0.5, "b": 1.0}, _V10_5,
    lambda p: (0.0, p.a), _mu10_5,
    lambda f, p: 2 * (_g(p) - 1) * ln(f) + ln(p.b**2 - f * f) - _g(p) * ln(p.a**2 - f * f),
    lambda p: SQ2 / 12 * p.lam * p.a**4 * (3 * p.b**2 - p.a**2),
    (_r10_0, _r10_a), _ordered("a", "b"), relation_form="exp_form",
))
_add(KinkCase(
    "phi10.5dm.outer", "phi10", "1.15d", "1.2", "1.15f", ("a", "b"), {"a": 0.5, "b": 1.0}, _V10_5,
    lambda p: (p.a, p.b), _mu10_5,
    lambda f, p: _g(p) * ln(f * f - p.a**2) - 2 * (_g(p) - 1) * ln(f) - ln(p.b**2 - f * f),
    lambda p: SQ2 / 12 * p.lam * (p.b**2 - p.a**2) ** 3,
    (_r10_a, _mu10_5), _ordered("a", "b"), relation_form="exp_form",
))

_V10_4 = _fp(("a", "minus", 2), ("b", "minus", 2), ("c", "plus", 1))
_mu10_4 = lambda p: 2 * SQ2 * p.lam * p.a * math.hypot(p.a, p.c) * (p.b**2 - p.a**2)
_K10 = lambda p: p.a * math.hypot(p.a, p.c) / (p.b * math.hypot(p.b, p.c))


def _F15b_core(f, p):
    al, be = p.a / p.c, p.b / p.c
    inner = ash((p.c + al * f) / (p.a - f)) - ash((p.c - al * f) / (p.a + f))
    outer = ash((p.c - be * f) / (p.b + f)) - ash((p.c + be * f) / (p.b - f))
    return inner, outer


def _E15(p):
    a, b, c = p.a, p.b, p.c
    P = 12 * a * a * b * b - 4 * a * a * c * c - 6 * b * b * c * c - 4 * a**4 - 3 * c**4
    Q = 12 * a * a * b * b - 4 * b * b * c * c - 6 * a * a * c * c - 4 * b**4 - 3 * c**4
    R = 8 * a * a * b * b + 2 * (a * a + b * b) * c * c + c**4
    return P, Q, R


_add(KinkCase(
    "phi10.4dm.inner", "phi10", "1.5b", "1.3", "1.5f", ("a", "b", "c"), {"a": 0.5, "b": 1.0, "c": 0.75}, _V10_4,
    lambda p: (-p.a, p.a), _mu10_4,
    lambda f, p: _F15b_core(f, p)[0] + _K10(p) * _F15b_core(f, p)[1],
    lambda p: SQ2 / 24 * p.lam * (p.a * math.hypot(p.a, p.c) * _E15(p)[0]
                                  + 3 * p.c**2 * _E15(p)[2] * math.asinh(p.a / p.c)),
    (_mu10_4, _mu10_4), _both(_ordered("a", "b"), _pos("c")), symmetric=True,
    corrections=(
        "inverse-sinh arguments are (c +- alpha phi)/(a -+ phi) and (c -+ beta phi)/(b +- phi); "
        "the printed extra 1/alpha and 1/beta break dF/dphi * sqrt(2V) = mu",
        "energy prefactor alpha*sqrt(1+alpha^2) replaced by a*sqrt(a^2+c^2) (dimensional fix, matches quadrature)",
    ),
))
_add(KinkCase(
    "phi10.4dm.outer", "phi10", "1.5k", "1.3", "1.5g", ("a", "b", "c"), {"a": 0.5, "b": 1.0, "c": 0.75}, _V10_4,
    lambda p: (p.a, p.b), _mu10_4,
    lambda f, p: -(ash((p.c + p.a / p.c * f) / (f - p.a)) - ash((p.c - p.a / p.c * f) / (p.a + f)))
    - _K10(p) * _F15b_core(f, p)[1],
    lambda p: SQ2 / 48 * p.lam * (p.a * math.hypot(p.a, p.c) * _E15(p)[0]
                                  - p.b * math.hypot(p.b, p.c) * _E15(p)[1]
                                  + 3 * p.c**2 * _E15(p)[2] * (math.asinh(p.a / p.c) - math.asinh(p.b / p.c))),
    (_mu10_4, lambda p: _mu10_4(p) / _K10(p)), _both(_ordered("a", "b"), _pos("c")),
    corrections=(
        "same inverse-sinh argument fix as the inner 4DM kink",
        "energy prefactors alpha*sqrt(1+alpha^2), beta*sqrt(1+beta^2) replaced by a*sqrt(a^2+c^2), b*sqrt(b^2+c^2)",
    ),
))


def _qa(p):
    return p.a**4 - p.b * p.a**2 + p.c


def _F18b(f, p):
    a, b, c = p.a, p.b, p.c
    w = math.sqrt(4 * c - b * b)
    t1 = math.sqrt(c / _qa(p)) * ash((2 * c - b * a * a + (2 * a * a - b) * f * f) / ((a * a - f * f) * w))
    return t1 - ash((2 * c - b * f * f) / (f * f * w))


def _E18t(p):
    a, b, c = p.a, p.b, p.c
    q = math.sqrt(_qa(p))
    return SQ2 / 96 * p.lam * (
        2 * (3 * b * b + 4 * a**4 - 4 * a * a * b - 8 * c) * q
        + 16 * c**1.5
        + 6 * b * (2 * a * a - b) * math.sqrt(c)
        + 3 * (b * b - 4 * c) * (2 * a * a - b) * math.log((-b + 2 * math.sqrt(c)) / (2 * a * a - b + 2 * q))
    )


def _c18b(p):
    bad = _pos("a", "b", "c")(p)
    if not p.b**2 < 4 * p.c:
        bad.append("b^2 < 4c")
    if not -p.b + 2 * math.sqrt(max(p.c, 0.0)) > 0:
        bad.append("-b + 2 sqrt(c) > 0")
    if not _qa(p) > 0:
        bad.append("a^4 - b a^2 + c > 0")
    return bad


_add(KinkCase(
    "phi10.3dm.I", "phi10", "1.8b", "1.8g", "18t", ("a", "b", "c"), {"a": 0.8, "b": 1.0, "c": 1.0},
    _fp(("a", "minus", 2), phi2=1, quartic=lambda p: (p.c, -p.b, 1.0)),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**2 * math.sqrt(p.c),
    _F18b, _E18t,
    (lambda p: SQ2 * p.lam * p.a**2 * math.sqrt(p.c), lambda p: 2 * SQ2 * p.lam * p.a**2 * math.sqrt(_qa(p))),
    _c18b,
    corrections=(
        "first term coefficient sqrt(c/(a^4 - b a^2 + c)), numerator 2c - b a^2, root sqrt(4c - b^2) "
        "(printed sqrt(c + a^4), 2c + b a^2, sqrt(4a^2 b - b^2 + 4c))",
    ),
))
_add(KinkCase(
    "phi10.3dm.II", "phi10", "1.8e", "1.8c", "unnumbered after (1.8e)", ("a", "b"), {"a": 0.8, "b": 1.0},
    _fp(("a", "minus", 2), ("b", "plus", 2), phi2=1),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**2 * p.b**2,
    lambda f, p: ln(f * f) - (p.b**2 / (p.a**2 + p.b**2)) * ln(p.a**2 - f * f)
    - (p.a**2 / (p.a**2 + p.b**2)) * ln(p.b**2 + f * f),
    lambda p: SQ2 / 12 * p.lam * p.a**4 * (p.a**2 + 3 * p.b**2),
    (lambda p: SQ2 * p.lam * p.a**2 * p.b**2, lambda p: 2 * SQ2 * p.lam * p.a**2 * (p.a**2 + p.b**2)),
    _pos("a", "b"), relation_form="exp_form",
    sign_window=lambda p: p.b * math.sqrt(2 - math.sqrt(3)) > p.a,
))
_add(KinkCase(
    "phi10.3dm.III", "phi10", "1.15b", "1.15a", "unnumbered after (1.15b-a)", ("a",), {"a": 0.8},
    _fp(("a", "minus", 2), phi2=3),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**4,
    lambda f, p: -(p.a**2) / (f * f) + ln(f * f / (p.a**2 - f * f)),
    lambda p: SQ2 / 12 * p.lam * p.a**6,
    (None, lambda p: 2 * SQ2 * p.lam * p.a**4), _pos("a"),
))
_add(KinkCase(
    "phi10.3dm.IV", "phi10", "1.81", "1.80", "1.8u", ("a", "b"), {"a": 0.8, "b": 1.0},
    _fp(("a", "minus", 2), ("b", "plus", 1), phi2=2),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**3 * math.hypot(p.a, p.b),
    lambda f, p: -2 * p.a * math.hypot(p.a, p.b) * _s(p, f) / (p.b**2 * f)
    + ash((p.b**2 + p.a * f) / (p.b * (p.a - f))) - ash((p.b**2 - p.a * f) / (p.b * (p.a + f))),
    lambda p: SQ2 / 48 * p.lam * (p.a * math.hypot(p.a, p.b) * (4 * p.a**4 + 4 * p.a**2 * p.b**2 + 3 * p.b**4)
                                  - 3 * p.b**4 * (2 * p.a**2 + p.b**2) * math.asinh(p.a / p.b)),
    (None, lambda p: 2 * SQ2 * p.lam * p.a**3 * math.hypot(p.a, p.b)), _pos("a", "b"),
    sign_window=lambda p: p.a > SQ2 * p.b,
))

_add(KinkCase(
    "phi10.2dm.I", "phi10", "1.15m", "1.15c", "1.15t", ("a", "b"), {"a": 0.9, "b": 1.0},
    _fp(("a", "minus", 2), ("b", "plus", 3)),
    lambda p: (-p.a, p.a), lambda p: 2 * SQ2 * p.lam * p.a * (p.a**2 + p.b**2) ** 1.5,
    lambda f, p: 2 * p.a * f * math.hypot(p.a, p.b) / (p.b**2 * _s(p, f))
    + ash((p.b**2 + p.a * f) / (p.b * (p.a - f))) - ash((p.b**2 - p.a * f) / (p.b * (p.a + f))),
    lambda p: SQ2 / 24 * p.lam * (p.a * math.hypot(p.a, p.b) * (4 * p.a**4 + 16 * p.a**2 * p.b**2 - 3 * p.b**4)
                                  + 3 * p.b**4 * (6 * p.a**2 + p.b**2) * math.asinh(p.a / p.b)),
    (lambda p: 2 * SQ2 * p.lam * p.a * (p.a**2 + p.b**2) ** 1.5,) * 2, _pos("a", "b"), symmetric=True,
    sign_window=lambda p: p.a < p.b * math.sqrt(3 - math.sqrt(6)) < math.sqrt(3) * p.a,
))
_add(KinkCase(
    "phi10.2dm.II", "phi10", "1.15k", "1.15l", "1.15u", ("a", "b"), {"a": 0.9, "b": 1.0},
    _fp(("a", "minus", 4), ("b", "plus", 1)),
    lambda p: (-p.a, p.a), lambda p: 4 * SQ2 * p.lam * p.a**3 * math.hypot(p.a, p.b),
    lambda f, p: 2 * f * p.a * _s(p, f) / ((p.a**2 - f * f) * math.hypot(p.a, p.b))
    + ((2 * p.a**2 + p.b**2) / (p.a**2 + p.b**2))
    * (ash((p.b**2 + p.a * f) / (p.b * (p.a - f))) - ash((p.b**2 - p.a * f) / (p.b * (p.a + f)))),
    lambda p: SQ2 / 24 * p.lam * (p.a * math.hypot(p.a, p.b) * (8 * p.a**4 - 10 * p.a**2 * p.b**2 - 3 * p.b**4)
                                  + 3 * p.b**2 * (8 * p.a**4 + 4 * p.a**2 * p.b**2 + p.b**4) * math.asinh(p.a / p.b)),
    (None, None), _pos("a", "b"), symmetric=True,
    sign_window=lambda p: p.a * math.sqrt(6) / 2 > p.b > p.a,
))
_add(KinkCase(
    "phi10.2dm.III", "phi10", "1.15h", "1.15g", "unnumbered after (1.15h)", ("a",), {"a": 0.9},
    _fp(("a", "minus", 5), absolute=True),
    lambda p: (-p.a, p.a), lambda p: 3 * SQ2 * p.lam * p.a**4,
    lambda f, p: f * (3 * p.a**2 - 2 * f * f) / (p.a**2 - f * f) ** 1.5,
    lambda p: 5 * SQ2 * math.pi / 16 * p.lam * p.a**6,
    (None, None), _pos("a"), symmetric=True,
))

# --------------------------------------------------------------- phi^12 ----
_V12_6 = _fp(("a", "minus", 2), ("b", "minus", 2), ("c", "minus", 2))


def _mu12_6(p):
    a2, b2, c2 = p.a**2, p.b**2, p.c**2
    return 2 * SQ2 * p.lam * (b2 - a2) * (c2 - b2) * (c2 - a2)


def _r12_6(which):
    def rate(p):
        a2, b2, c2 = p.a**2, p.b**2, p.c**2
        return {
            "a": _mu12_6(p) * p.a / (c2 - b2),
            "b": _mu12_6(p) * p.b / (c2 - a2),
            "c": _mu12_6(p) * p.c / (b2 - a2),
        }[which]

    return rate


_D6 = {"a": 0.25, "b": 2.0 / 3.0, "c": 1.0}


def _w6(p):
    a2, b2, c2 = p.a**2, p.b**2, p.c**2
    return (c2 - b2) / p.a, (c2 - a2) / p.b, (b2 - a2) / p.c


_add(KinkCase(
    "phi12.6dm.inner", "phi12", "3.4", "3.1", "3.4h", ("a", "b", "c"), _D6, _V12_6,
    lambda p: (-p.a, p.a), _mu12_6,
    lambda f, p: _w6(p)[0] * ln((p.a + f) / (p.a - f)) + _w6(p)[1] * ln((p.b - f) / (p.b + f))
    + _w6(p)[2] * ln((p.c + f) / (p.c - f)),
    lambda p: 4 * SQ2 / 105 * p.lam * p.a**3 * (3 * p.a**4 - 7 * (p.b**2 + p.c**2) * p.a**2 + 35 * p.b**2 * p.c**2),
    (_r12_6("a"), _r12_6("a")), _ordered("a", "b", "c"), symmetric=True, relation_form="exp_form",
))
_add(KinkCase(
    "phi12.6dm.mid", "phi12", "3.4d", "3.1", "3.4j", ("a", "b", "c"), _D6, _V12_6,
    lambda p: (p.a, p.b), _mu12_6,
    lambda f, p: _w6(p)[0] * ln((f - p.a) / (f + p.a)) + _w6(p)[1] * ln((p.b + f) / (p.b - f))
    + _w6(p)[2] * ln((p.c - f) / (p.c + f)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.b - p.a) ** 3 * (
        7 * p.c**2 * (p.b**2 + 3 * p.a * p.b + p.a**2)
        - (3 * p.b**4 + 9 * p.b**3 * p.a + 11 * p.b**2 * p.a**2 + 9 * p.b * p.a**3 + 3 * p.a**4)),
    (_r12_6("a"), _r12_6("b")), _ordered("a", "b", "c"), relation_form="exp_form",
    corrections=("last logarithm is ln((c - phi)/(c + phi)); the printed reciprocal makes F decrease near c",),
))
_add(KinkCase(
    "phi12.6dm.outer", "phi12", "3.4e", "3.1", "3.4k", ("a", "b", "c"), _D6, _V12_6,
    lambda p: (p.b, p.c), _mu12_6,
    lambda f, p: _w6(p)[0] * ln((f + p.a) / (f - p.a)) + _w6(p)[1] * ln((f - p.b) / (f + p.b))
    + _w6(p)[2] * ln((p.c + f) / (p.c - f)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.c - p.b) ** 3 * (
        3 * p.c**4 + 9 * p.c**3 * p.b + 11 * p.c**2 * p.b**2 + 9 * p.c * p.b**3 + 3 * p.b**4
        - 7 * p.a**2 * (p.c**2 + 3 * p.b * p.c + p.b**2)),
    (_r12_6("b"), _r12_6("c")), _ordered("a", "b", "c"), relation_form="exp_form",
))

_V12_5I = _fp(("a", "minus", 2), ("b", "minus", 2), ("c", "plus", 1), phi2=1)
_mu12_5I = lambda p: 2 * SQ2 * p.lam * p.a**2 * p.b**2 * p.c
_D5 = {"a": 0.5, "b": 1.0, "c": 2.0}


def _F38(f, p, outer=False):
    a, b, c = p.a, p.b, p.c
    s = _s(p, f, "c")
    sa, sb = math.hypot(a, c), math.hypot(b, c)
    ka = b * b * c / ((b * b - a * a) * sa)
    kb = a * a * c / ((b * b - a * a) * sb)
    if not outer:
        return _lnq(p, f, "c") + kb * ln((sb - s) / (sb + s)) + ka * ln((sa + s) / (sa - s))
    return -_lnq(p, f, "c") + ka * ln((s - sa) / (s + sa)) + kb * ln((s + sb) / (sb - s))


_add(KinkCase(
    "phi12.5dm.I.inner", "phi12", "3.8", "3.5", "3.8j", ("a", "b", "c"), _D5, _V12_5I,
    lambda p: (0.0, p.a), _mu12_5I, _F38,
    lambda p: SQ2 / 105 * p.lam * (
        2 * (p.c**2 + p.a**2) ** 2.5 * (4 * p.c**2 + 7 * p.b**2 - 3 * p.a**2)
        - p.c**3 * (35 * p.a**2 * p.b**2 + 14 * p.a**2 * p.c**2 + 14 * p.b**2 * p.c**2 + 8 * p.c**4)),
    (lambda p: _mu12_5I(p) / 2, lambda p: 2 * SQ2 * p.lam * p.a**2 * (p.b**2 - p.a**2) * math.hypot(p.a, p.c)),
    _both(_ordered("a", "b"), _pos("c")), relation_form="exp_form",
    corrections=("energy: exponent 5/2 on (c^2+a^2) and 4c^2 in the bracket (printed 3/2 and 4c^4)",),
))
_add(KinkCase(
    "phi12.5dm.I.outer", "phi12", "3.8d", "3.5", "3.8jj", ("a", "b", "c"), _D5, _V12_5I,
    lambda p: (p.a, p.b), _mu12_5I, lambda f, p: _F38(f, p, outer=True),
    lambda p: 2 * SQ2 / 105 * p.lam * (
        (p.a**2 + p.c**2) ** 2.5 * (4 * p.c**2 + 7 * p.b**2 - 3 * p.a**2)
        - (p.b**2 + p.c**2) ** 2.5 * (4 * p.c**2 - 3 * p.b**2 + 7 * p.a**2)),
    (lambda p: 2 * SQ2 * p.lam * p.a**2 * (p.b**2 - p.a**2) * math.hypot(p.a, p.c),
     lambda p: 2 * SQ2 * p.lam * p.b**2 * (p.b**2 - p.a**2) * math.hypot(p.b, p.c)),
    _both(_ordered("a", "b"), _pos("c")), relation_form="exp_form",
    corrections=("first term is -ln((s-c)/(s+c)); energy exponents 5/2 (printed 3/2)",),
))

_V12_5II = _fp(("a", "minus", 2), ("b", "minus", 2), phi2=2)
_mu12_5II = lambda p: 2 * SQ2 * p.lam * p.a**3 * (p.b**2 - p.a**2)
_D5II = {"a": 0.5, "b": 1.0}
_add(KinkCase(
    "phi12.5dm.II.inner", "phi12", "3.8k", "3.5d", "p1", ("a", "b"), _D5II, _V12_5II,
    lambda p: (0.0, p.a), _mu12_5II,
    lambda f, p: -2 * p.a * (p.b**2 - p.a**2) / (p.b**2 * f) + ln((p.a + f) / (p.a - f))
    + (p.a**3 / p.b**3) * ln((p.b - f) / (p.b + f)),
    lambda p: 2 * SQ2 / 105 * p.lam * p.a**5 * (7 * p.b**2 - 3 * p.a**2),
    (None, _mu12_5II), _ordered("a", "b"),
))
_add(KinkCase(
    "phi12.5dm.II.outer", "phi12", "3.8f", "3.5d", "p2", ("a", "b"), _D5II, _V12_5II,
    lambda p: (p.a, p.b), _mu12_5II,
    lambda f, p: 2 * p.a * (p.b**2 - p.a**2) / (p.b**2 * f) + ln((f - p.a) / (f + p.a))
    + (p.a**3 / p.b**3) * ln((p.b + f) / (p.b - f)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.b - p.a) ** 3 * (
        3 * p.b**4 + 9 * p.b**3 * p.a + 11 * p.b**2 * p.a**2 + 9 * p.b * p.a**3 + 3 * p.a**4),
    (_mu12_5II, lambda p: _mu12_5II(p) * p.b**3 / p.a**3), _ordered("a", "b"),
))

_D4 = {"a": 0.5, "b": 1.0, "c": 0.75}
_V12_4I = _fp(("a", "minus", 2), ("b", "minus", 2), ("c", "plus", 2))
_mu12_4I = lambda p: 2 * SQ2 * p.lam * p.a * (p.c**2 + p.a**2) * (p.b**2 - p.a**2)


def _k310(p):
    a, b, c = p.a, p.b, p.c
    return 2 * a * (b * b - a * a) / (c * (c * c + b * b)), a * (a * a + c * c) / (b * (c * c + b * b))


_c4 = _both(_ordered("a", "b"), _pos("c"))
_add(KinkCase(
    "phi12.4dm.I.inner", "phi12", "3.10", "3.9", "3.10ff", ("a", "b", "c"), _D4, _V12_4I,
    lambda p: (-p.a, p.a), _mu12_4I,
    lambda f, p: _k310(p)[0] * atan(f / p.c) + ln((p.a + f) / (p.a - f)) + _k310(p)[1] * ln((p.b - f) / (p.b + f)),
    lambda p: 4 * SQ2 / 105 * p.lam * p.a**3 * (
        35 * p.b**2 * p.c**2 - 7 * p.a**2 * p.c**2 + 7 * p.a**2 * p.b**2 - 3 * p.a**4),
    (_mu12_4I, _mu12_4I), _c4, symmetric=True,
    corrections=("coefficient a(a^2+c^2)/(b(c^2+b^2)) multiplies only ln((b-phi)/(b+phi)), not the a-logarithm",),
))
_add(KinkCase(
    "phi12.4dm.I.outer", "phi12", "3.10d", "3.9", "3.10p", ("a", "b", "c"), _D4, _V12_4I,
    lambda p: (p.a, p.b), _mu12_4I,
    lambda f, p: -_k310(p)[0] * atan(f / p.c) + ln((f - p.a) / (f + p.a)) + _k310(p)[1] * ln((p.b + f) / (p.b - f)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.b - p.a) ** 3 * (
        3 * p.b**4 + 9 * p.b**3 * p.a + 11 * p.b**2 * p.a**2 + 9 * p.b * p.a**3 + 3 * p.a**4
        + 7 * p.c**2 * (p.b**2 + 3 * p.a * p.b + p.a**2)),
    (_mu12_4I, lambda p: _mu12_4I(p) * p.b * (p.b**2 + p.c**2) / (p.a * (p.a**2 + p.c**2))), _c4,
    corrections=("same coefficient placement fix as the inner Case I kink",),
))

_V12_4II = _fp(("a", "minus", 4), ("b", "minus", 2))
_mu12_4II = lambda p: 2 * SQ2 * p.lam * p.b * (p.b**2 - p.a**2) ** 2
_add(KinkCase(
    "phi12.4dm.II.inner", "phi12", "3.10e", "3.9k", "3.10m", ("a", "b"), _D5II, _V12_4II,
    lambda p: (-p.a, p.a), _mu12_4II,
    lambda f, p: p.b * f * (p.b**2 - p.a**2) / (p.a**2 * (p.a**2 - f * f)) + ln((p.b + f) / (p.b - f))
    - p.b * (3 * p.a**2 - p.b**2) / (2 * p.a**3) * ln((p.a + f) / (p.a - f)),
    lambda p: 16 * SQ2 / 105 * p.lam * p.a**5 * (7 * p.b**2 - p.a**2),
    (None, None), _ordered("a", "b"), symmetric=True,
))
_add(KinkCase(
    "phi12.4dm.II.outer", "phi12", "3.10f", "3.9k", "3.10n", ("a", "b"), _D5II, _V12_4II,
    lambda p: (p.a, p.b), _mu12_4II,
    lambda f, p: -p.b * f * (p.b**2 - p.a**2) / (p.a**2 * (f * f - p.a**2)) + ln((p.b + f) / (p.b - f))
    + p.b * (3 * p.a**2 - p.b**2) / (2 * p.a**3) * ln((f - p.a) / (f + p.a)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.b - p.a) ** 4 * (
        3 * p.b**3 + 12 * p.b**2 * p.a + 16 * p.b * p.a**2 + 4 * p.a**3),
    (None, _mu12_4II), _ordered("a", "b"),
))

_V12_4III = _fp(("a", "minus", 2), ("b", "minus", 4))
_mu12_4III = lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 - p.a**2) ** 2
_add(KinkCase(
    "phi12.4dm.III.inner", "phi12", "3.10g", "3.9d", "pr63", ("a", "b"), _D5II, _V12_4III,
    lambda p: (-p.a, p.a), _mu12_4III,
    lambda f, p: -p.a * f * (p.b**2 - p.a**2) / (p.b**2 * (p.b**2 - f * f)) + ln((p.a + f) / (p.a - f))
    - p.a * (3 * p.b**2 - p.a**2) / (2 * p.b**3) * ln((p.b + f) / (p.b - f)),
    lambda p: 4 * SQ2 / 105 * p.lam * p.a**3 * (35 * p.b**4 - 14 * p.a**2 * p.b**2 + 3 * p.a**4),
    (_mu12_4III, _mu12_4III), _ordered("a", "b"), symmetric=True,
))
_add(KinkCase(
    "phi12.4dm.III.outer", "phi12", "3.10h", "3.9d", "p3", ("a", "b"), _D5II, _V12_4III,
    lambda p: (p.a, p.b), _mu12_4III,
    lambda f, p: p.a * f * (p.b**2 - p.a**2) / (p.b**2 * (p.b**2 - f * f)) + ln((f - p.a) / (f + p.a))
    + p.a * (3 * p.b**2 - p.a**2) / (2 * p.b**3) * ln((p.b + f) / (p.b - f)),
    lambda p: 2 * SQ2 / 105 * p.lam * (p.b - p.a) ** 4 * (
        4 * p.b**3 + 16 * p.b**2 * p.a + 12 * p.b * p.a**2 + 3 * p.a**3),
    (_mu12_4III, None), _ordered("a", "b"),
))

_D3 = {"a": 0.8, "b": 1.0}
_add(KinkCase(
    "phi12.3dm.I", "phi12", "3.12", "3.11", "3.12j", ("a",), {"a": 0.8},
    _fp(("a", "minus", 2), phi2=4),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**5,
    lambda f, p: -2 * p.a / f - 2 * p.a**3 / (3 * f**3) + ln((p.a + f) / (p.a - f)),
    lambda p: 2 * SQ2 / 35 * p.lam * p.a**7,
    (None, lambda p: 2 * SQ2 * p.lam * p.a**5), _pos("a"),
))
_add(KinkCase(
    "phi12.3dm.II", "phi12", "3.14", "3.13", "3.14j", ("a",), {"a": 0.8},
    _fp(("a", "minus", 4), phi2=2),
    lambda p: (0.0, p.a), lambda p: 4 * SQ2 / 3 * p.lam * p.a**5,
    lambda f, p: 2 * p.a * (3 * f * f - 2 * p.a**2) / (3 * f * (p.a**2 - f * f)) + ln((p.a + f) / (p.a - f)),
    lambda p: 8 * SQ2 / 105 * p.lam * p.a**7,
    (None, None), _pos("a"),
))
_add(KinkCase(
    "phi12.3dm.III", "phi12", "3.16", "3.15", "3.16j", ("a", "b"), _D3,
    _fp(("a", "minus", 2), ("b", "plus", 2), phi2=2),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**3 * (p.b**2 + p.a**2),
    lambda f, p: -2 * p.a * (p.b**2 + p.a**2) / (p.b**2 * f) - 2 * p.a**3 / p.b**3 * atan(f / p.b)
    + ln((p.a + f) / (p.a - f)),
    lambda p: 2 * SQ2 / 105 * p.lam * p.a**5 * (7 * p.b**2 + 3 * p.a**2),
    (None, lambda p: 2 * SQ2 * p.lam * p.a**3 * (p.b**2 + p.a**2)), _pos("a", "b"),
    sign_window=lambda p: p.b * math.sqrt(2 - math.sqrt(3)) > p.a,
))


def _sig(p):
    return math.hypot(p.a, p.b)


_add(KinkCase(
    "phi12.3dm.IV", "phi12", "3.18", "3.17", "3.18j", ("a", "b"), _D3,
    _fp(("a", "minus", 2), ("b", "plus", 3), phi2=1),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**2 * _sig(p) ** 3,
    lambda f, p: 2 * p.a**2 * _sig(p) / (p.b**2 * _s(p, f)) + (_sig(p) ** 3 / p.b**3) * _lnq(p, f)
    + ln((_sig(p) + _s(p, f)) / (_sig(p) - _s(p, f))),
    lambda p: SQ2 / 35 * p.lam * (2 * _sig(p) ** 7 - p.b**5 * (7 * p.a**2 + 2 * p.b**2)),
    (lambda p: SQ2 * p.lam * p.a**2 * p.b**3, lambda p: 2 * SQ2 * p.lam * p.a**2 * _sig(p) ** 3), _pos("a", "b"),
    sign_window=lambda p: p.a < p.b * math.sqrt(3 - math.sqrt(6)) < math.sqrt(3) * p.a,
    corrections=(
        "mu = 2 sqrt(2) lam a^2 sigma^3 (printed sqrt(2) lam sigma^3)",
        "relation: the sigma^3/b^3 weight sits on the b-logarithm only, plus the rational term 2 a^2 sigma/(b^2 s)",
        "energy bracket b^5 (7a^2 + 2b^2) (printed b^2 for 2b^2)",
    ),
))
_add(KinkCase(
    "phi12.3dm.V", "phi12", "3.18r", "3.17r", "3.18l", ("a", "b"), _D3,
    _fp(("a", "minus", 2), ("b", "plus", 1), phi2=3),
    lambda p: (0.0, p.a), lambda p: 2 * SQ2 * p.lam * p.a**4 * _sig(p),
    lambda f, p: -p.a**2 * _sig(p) * _s(p, f) / (p.b**2 * f * f)
    + ((2 * p.b**2 - p.a**2) * _sig(p) / (2 * p.b**3)) * _lnq(p, f)
    + ln((_s(p, f) + _sig(p)) / (_sig(p) - _s(p, f))),
    lambda p: 2 * SQ2 / 105 * p.lam * ((4 * p.b**2 + 7 * p.a**2) * p.b**5 - (4 * p.b**2 - 3 * p.a**2) * _sig(p) ** 5),
    (None, lambda p: 2 * SQ2 * p.lam * p.a**4 * _sig(p)), _pos("a", "b"),
    sign_window=lambda p: p.b > SQ2 * p.a,
    corrections=("b-logarithm weight (2b^2 - a^2) sigma/(2 b^3) and the sigma-logarithm carries unit weight",),
))

_D2 = {"a": 0.9, "b": 1.0}
_add(KinkCase(
    "phi12.2dm.I", "phi12", "3.20", "3.19", "3.20j", ("a", "b"), _D2,
    _fp(("a", "minus", 2), ("b", "plus", 4)),
    lambda p: (-p.a, p.a), lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 + p.a**2) ** 2,
    lambda f, p: p.a * (p.b**2 + p.a**2) * f / (p.b**2 * (p.b**2 + f * f))
    + p.a * (p.a**2 + 3 * p.b**2) / p.b**3 * atan(f / p.b) + ln((p.a + f) / (p.a - f)),
    lambda p: 4 * SQ2 / 105 * p.lam * p.a**3 * (35 * p.b**4 + 14 * p.a**2 * p.b**2 + 3 * p.a**4),
    (lambda p: 2 * SQ2 * p.lam * p.a * (p.b**2 + p.a**2) ** 2,) * 2, _pos("a", "b"), symmetric=True,
))
_add(KinkCase(
    "phi12.2dm.II", "phi12", "3.24", "3.23", "3.24j", ("a", "b"), _D2,
    _fp(("a", "minus", 4), ("b", "plus", 2)),
    lambda p: (-p.a, p.a), lambda p: 4 * SQ2 * p.lam * p.a**3 * (p.b**2 + p.a**2) ** 2 / (3 * p.a**2 + p.b**2),
    lambda f, p: 2 * p.a * (p.b**2 + p.a**2) * f / ((3 * p.a**2 + p.b**2) * (p.a**2 - f * f))
    + 4 * p.a**3 / (p.b * (3 * p.a**2 + p.b**2)) * atan(f / p.b) + ln((p.a + f) / (p.a - f)),
    lambda p: 16 * SQ2 / 105 * p.lam * p.a**5 * (7 * p.b**2 + p.a**2),
    (None, None), _pos("a", "b"), symmetric=True,
    corrections=("mu carries a factor a^3 that the printed expression drops",),
))
_add(KinkCase(
    "phi12.2dm.III", "phi12", "3.22", "3.21", "3.22j", ("a",), {"a": 0.9},
    _fp(("a", "minus", 6)),
    lambda p: (-p.a, p.a), lambda p: 16 * SQ2 / 3 * p.lam * p.a**5,
    lambda f, p: 2 * p.a * (5 * p.a**2 - 3 * f * f) * f / (3 * (p.a**2 - f * f) ** 2) + ln((p.a + f) / (p.a - f)),
    lambda p: 32 * SQ2 / 35 * p.lam * p.a**7,
    (None, None), _pos("a"), symmetric=True,
    corrections=("rational term 2a(5a^2 - 3 phi^2) phi / (3 (a^2 - phi^2)^2) (printed a(7a^2 - 3 phi^2) phi / ...)",),
))


# ------------------------------------------------------------ operations ----

def list_cases(family: str | None = None, connecting=None):
    """Registered cases, optionally filtered by family and by connected minima.

    connecting is a pair of symbols such as ("-a", "a") or ("a", "b").
    """
    out = list(_REG.values())
    if family is not None:
        out = [c for c in out if c.family == family]
    if connecting is not None:
        want = tuple(connecting)
        out = [c for c in out if _minima_symbols(c) == want]
    return out


def _minima_symbols(case: KinkCase):
    p = case.params()
    lo, hi = case.minima(p)
    names = {0.0: "0"}
    for n in case.param_names:
        v = getattr(p, n)
        names[v] = n
        names[-v] = "-" + n
    return names.get(lo, repr(lo)), names.get(hi, repr(hi))


def get_case(case_id: str) -> KinkCase:
    try:
        return _REG[case_id]
    except KeyError:
        raise CatalogError(f"unknown case {case_id!r}") from None


def _resolve(case, p):
    if isinstance(case, str):
        case = get_case(case)
    if p is None:
        p = case.params()
    return case, case.validate(p)


def implicit_residual(case, phi, x, p: Params | None = None):
    """F(phi) - mu*x; zero exactly on the kink.  Raises DomainError outside the open interval."""
    case, p = _resolve(case, p)
    lo, hi = case.minima(p)
    f = np.asarray(phi, dtype=float)
    if np.any(f <= lo) or np.any(f >= hi):
        raise DomainError(f"phi must lie strictly inside ({lo}, {hi})")
    with np.errstate(all="ignore"):
        return case.relation(f, p) - case.mu(p) * np.asarray(x, dtype=float)


def closed_form_energy(case, p: Params | None = None) -> float:
    case, p = _resolve(case, p)
    return float(case.energy(p))


def _richardson(g, h, levels=6):
    """Limit of g(d) as d -> 0 for g analytic in d."""
    row = [g(h / 2**k) for k in range(levels)]
    for j in range(1, levels):
        f = 2.0**j
        row = [(f * row[k + 1] - row[k]) / (f - 1) for k in range(len(row) - 1)]
    return row[0]


def _exp_prefactor(case, p, side, rate):
    lo, hi = case.minima(p)
    mu = case.mu(p)
    h = 1e-3 * (hi - lo)
    F = lambda f: float(case.relation(np.array([f]), p)[0])
    with np.errstate(all="ignore"):
        if side == "plus":
            C = _richardson(lambda d: F(hi - d) + (mu / rate) * math.log(d), h)
            return -math.exp(rate * C / mu)
        C = _richardson(lambda d: F(lo + d) - (mu / rate) * math.log(d), h)
        return math.exp(-rate * C / mu)


def _alg_tail(case, p, side):
    lo, hi = case.minima(p)
    phi_e = hi if side == "plus" else lo
    order, k = case.V(p).vanishing_order(phi_e)
    m = order / 2
    if m <= 1:
        raise CatalogError(f"{case.id}: minimum at {phi_e} is not flat enough for an algebraic tail")
    expo = 1.0 / (m - 1)
    pref = ((m - 1) * p.lam * math.sqrt(2 * k)) ** (-expo)
    return expo, (-pref if side == "plus" else pref)


def tail(case, side: str, p: Params | None = None) -> TailAsymptote:
    """Catalogued tail on one side ("minus" is x -> -inf, "plus" is x -> +inf)."""
    case, p = _resolve(case, p)
    if side not in ("minus", "plus"):
        raise CatalogError("side must be 'minus' or 'plus'")
    lo, hi = case.minima(p)
    approach = lo if side == "minus" else hi
    rate_fn = case.rates[0 if side == "minus" else 1]
    if rate_fn is None:
        expo, pref = _alg_tail(case, p, side)
        return TailAsymptote(side, "algebraic", None, expo, pref, approach)
    r = float(rate_fn(p))
    return TailAsymptote(side, "exponential", r, None, _exp_prefactor(case, p, side, r), approach)


def energy_crossover(case_a, case_b, bracket=(1.0 + 1e-9, 10.0), vary: str = "b", tol: float = 1e-12) -> float:
    """Ratio b/a (with a fixed at its canonical value) where the two energies coincide."""
    A = get_case(case_a) if isinstance(case_a, str) else case_a
    B = get_case(case_b) if isinstance(case_b, str) else case_b
    base = A.params()

    def diff(r):
        kw = {vary: r * base.a} if vary == "b" else {}
        pa = A.validate(A.params(**kw))
        pb = B.validate(B.params(**kw))
        return A.energy(pa) - B.energy(pb)

    lo, hi = bracket
    flo, fhi = diff(lo), diff(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"energy difference has no sign change on [{lo}, {hi}]")
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = diff(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def catalog_json(indent: int | None = 2) -> str:
    return json.dumps([c.descriptor() for c in _REG.values()], indent=indent)


def reference_map() -> dict:
    """case id -> dict of equation labels."""
    return {c.id: {"relation": c.eq, "potential": c.potential_eq, "energy": c.energy_eq} for c in _REG.values()}
