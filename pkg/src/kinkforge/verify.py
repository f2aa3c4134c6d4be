"""Closed-form vs independent-route checks for catalog cases."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .catalog import KinkCase, Params, get_case, list_cases, tail
from .numeric import fit_tail, integrate_bps, invert_implicit, inverted_profile, quadrature_energy, tail_window

__all__ = ["TOLERANCES", "PREFACTOR_FLAGGED", "TailCheck", "CaseReport", "verify_case", "verify_all",
           "profile_gap", "check_tails"]

TOLERANCES = {
    "energy_rel": 1e-8,
    "profile_gap": 1e-6,  # times the kink width
    "rate_rel": 0.01,
    "exponent_rel": 0.02,
    "prefactor_rel": 0.02,
}

# printed prefactors for these cases disagree with the implicit relations; only kind and rate are asserted
PREFACTOR_FLAGGED = frozenset({"phi10.4dm.inner", "phi10.4dm.outer", "phi12.5dm.II.outer"})

ALG_CAP = 1e4  # integration reach for algebraic tails
FIT_CAP = 1e8  # inversion-only reach used by the tail fits


class TailCheck(NamedTuple):
    side: str
    expected: str
    found: str
    rate_rel: float | None
    exponent_rel: float | None
    prefactor_rel: float
    prefactor_checked: bool
    ok: bool


class CaseReport(NamedTuple):
    case: str
    params: Params
    energy_closed: float
    energy_quad: float
    energy_rel: float
    profile_gap: float
    tails: tuple
    ok: bool

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "params": self.params._asdict(),
            "energy_closed": self.energy_closed,
            "energy_quad": self.energy_quad,
            "energy_rel": self.energy_rel,
            "profile_gap": self.profile_gap,
            "tails": [t._asdict() for t in self.tails],
            "ok": self.ok,
        }


def _grid(case, p, npts=300):
    Xm, Xp = tail_window(case, p, alg_cap=ALG_CAP)
    return np.concatenate((-np.geomspace(Xm, 1e-3, npts), [0.0], np.geomspace(1e-3, Xp, npts)))


def profile_gap(case: KinkCase, p: Params) -> float:
    """sup |inverted - integrated| / width over the resolvable window, both anchored at x = 0."""
    lo, hi = case.minima(p)
    x = _grid(case, p)
    inv = invert_implicit(case, x, p)
    phi0 = float(inv.phi[x == 0.0][0])
    prof = integrate_bps(case.V(p), x, 0.0, phi0, minima=(lo, hi))
    idx = np.searchsorted(x, prof.x)
    return float(np.max(np.abs(inv.phi[idx] - prof.phi)) / (hi - lo))


def check_tails(case: KinkCase, p: Params, npts: int = 2000):
    Xm, Xp = tail_window(case, p, alg_reach=1e-8, alg_cap=FIT_CAP)
    x = np.concatenate((-np.linspace(Xm, 0.0, npts, endpoint=False), [0.0], np.linspace(0.0, Xp, npts + 1)[1:]))
    prof = inverted_profile(case, x, p)
    out = []
    for side in ("minus", "plus"):
        ref = tail(case, side, p)
        fit = fit_tail(prof, side)
        ok = fit.kind == ref.kind
        rrel = erel = None
        if ref.kind == "exponential" and fit.kind == "exponential":
            rrel = abs(fit.rate / ref.rate - 1.0)
            ok &= rrel <= TOLERANCES["rate_rel"]
        elif ref.kind == "algebraic" and fit.kind == "algebraic":
            erel = abs(fit.exponent / ref.exponent - 1.0)
            ok &= erel <= TOLERANCES["exponent_rel"]
        prel = abs(fit.prefactor / ref.prefactor - 1.0)
        checked = case.id not in PREFACTOR_FLAGGED
        if checked:
            ok &= prel <= TOLERANCES["prefactor_rel"]
        out.append(TailCheck(side, ref.kind, fit.kind, rrel, erel, prel, checked, bool(ok)))
    return tuple(out)


def verify_case(case, p: Params | None = None, tails: bool = True) -> CaseReport:
    case = get_case(case) if isinstance(case, str) else case
    p = case.validate(p if p is not None else case.params())
    lo, hi = case.minima(p)
    ec = float(case.energy(p))
    eq = float(quadrature_energy(case.V(p), lo, hi))
    erel = abs(ec - eq) / abs(eq) if eq else abs(ec)
    gap = profile_gap(case, p)
    tc = check_tails(case, p) if tails else ()
    ok = erel <= TOLERANCES["energy_rel"] and gap <= TOLERANCES["profile_gap"] and all(t.ok for t in tc)
    if not (math.isfinite(erel) and math.isfinite(gap)):
        ok = False
    return CaseReport(case.id, p, ec, eq, erel, gap, tc, bool(ok))


def _verify_id(case_id):
    return verify_case(case_id)


def verify_all(jobs: int = 1):
    ids = [c.id for c in list_cases()]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_verify_id, ids))
    return [_verify_id(i) for i in ids]
