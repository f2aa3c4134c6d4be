"""V'' mass terms and dispersion about equilibria, plus the tabulated mass terms."""
from __future__ import annotations

import csv
import io
from typing import NamedTuple

import numpy as np

from .catalog import get_case
from .potential import FactoredPotential, PolynomialPotential, expand_factored

__all__ = [
    "NotEquilibrium",
    "PhononBranch",
    "PhononRow",
    "mass_term",
    "mass_term_fd",
    "branch",
    "dispersion",
    "phonon_table",
    "table_csv",
]

ZERO_TOL = 1e-12


class NotEquilibrium(ValueError):
    pass


class PhononBranch(NamedTuple):
    equilibrium: float
    mass_term: float
    kind: str  # "optical" | "acoustic_nonlinear"


def _fd(f, x, h, k):
    if k == 1:
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def _scale(pot, phi_e):
    # magnitude of V on a unit neighbourhood, used for relative zero tests
    probe = np.linspace(phi_e - 1.0, phi_e + 1.0, 41)
    with np.errstate(all="ignore"):
        v = np.abs(pot(probe))
    return max(float(np.nanmax(v)), pot.lam**2)


def mass_term(pot, phi_e: float, tol: float = 1e-9) -> float:
    """V''(phi_e), exact for polynomials and via the vanishing order for factored forms."""
    if isinstance(pot, FactoredPotential) and pot.is_polynomial:
        pot = expand_factored(pot)
    sc = _scale(pot, phi_e)
    if isinstance(pot, PolynomialPotential):
        d1 = float(pot.derivative(phi_e, 1))
        if abs(d1) > tol * sc:
            raise NotEquilibrium(f"V'({phi_e}) = {d1:.3e}")
        return float(pot.derivative(phi_e, 2))
    v = float(pot(phi_e))
    if abs(v) <= ZERO_TOL * sc:
        order, k = pot.vanishing_order(phi_e)
        if order < 2:
            raise NotEquilibrium(f"V vanishes only to order {order} at {phi_e}")
        return 2.0 * pot.lam**2 * k if order == 2 else 0.0
    h = 1e-3
    d1 = float(_fd(pot, np.array([phi_e]), h, 1)[0])
    if abs(d1) > 1e-6 * sc:
        raise NotEquilibrium(f"V'({phi_e}) ~ {d1:.3e}")
    return float(_fd(pot, np.array([phi_e]), h, 2)[0])


def mass_term_fd(pot, phi_e: float, h: float = 1e-3) -> float:
    """Fourth-order central difference for V''; independent of mass_term."""
    return float(_fd(pot, np.array([phi_e]), h, 2)[0])


def branch(pot, phi_e: float) -> PhononBranch:
    m = mass_term(pot, phi_e)
    if m < -ZERO_TOL * _scale(pot, phi_e):
        raise NotEquilibrium(f"phi_e={phi_e} is a maximum (V''={m:.3e})")
    kind = "acoustic_nonlinear" if abs(m) <= ZERO_TOL * _scale(pot, phi_e) else "optical"
    return PhononBranch(phi_e, 0.0 if kind == "acoustic_nonlinear" else m, kind)


def dispersion(br: PhononBranch, q):
    """omega(q) = sqrt(q^2 + V''(phi_e))."""
    q = np.asarray(q, dtype=float)
    return np.sqrt(q * q + br.mass_term)


class PhononRow(NamedTuple):
    table: str
    potential_eq: str
    phi_e_label: str
    phi_e: float
    closed: float  # corrected closed form
    numeric: float
    printed: float  # the table entry as printed
    kind: str
    note: str


def _p(case_id):
    c = get_case(case_id)
    return c, c.params()


# (table, potential eq, source case, phi_e label, closed-form V''/lam^2, printed V''/lam^2 or None, note)
_ROWS = [
    ("I", "4", "phi8.4dm.inner", "±a", lambda a, b, c: 8 * a**2 * (b**2 - a**2) ** 2, None, ""),
    ("I", "4", "phi8.4dm.inner", "±b", lambda a, b, c: 8 * b**2 * (b**2 - a**2) ** 2, None, ""),
    ("I", "7.1", "phi8.3dm.I", "±a", lambda a, b, c: 8 * a**6, None, ""),
    ("I", "7.1", "phi8.3dm.I", "0", lambda a, b, c: 0.0, None, ""),
    ("I", "7.3", "phi8.3dm.II", "±a", lambda a, b, c: 8 * a**4 * (b**2 + a**2), None, ""),
    ("I", "7.3", "phi8.3dm.II", "0", lambda a, b, c: 2 * a**4 * b**2, None, ""),
    ("I", "7.7", "phi8.2dm.I", "±a", lambda a, b, c: 0.0, None, ""),
    ("I", "7.5", "phi8.2dm.II", "±a", lambda a, b, c: 8 * a**2 * (b**2 + a**2) ** 2, "lam",
     "printed with a single power of lambda; lambda^2 used"),
    ("II", "1.2", "phi10.5dm.inner", "0", lambda a, b, c: 2 * a**4 * b**4, None, ""),
    ("II", "1.2", "phi10.5dm.inner", "±a", lambda a, b, c: 8 * a**4 * (b**2 - a**2) ** 2, None, ""),
    ("II", "1.2", "phi10.5dm.inner", "±b", lambda a, b, c: 8 * b**4 * (b**2 - a**2) ** 2, None, ""),
    ("II", "1.3", "phi10.4dm.inner", "±a", lambda a, b, c: 8 * a**2 * (b**2 - a**2) ** 2 * (c**2 + a**2), None, ""),
    ("II", "1.3", "phi10.4dm.inner", "±b", lambda a, b, c: 8 * b**2 * (b**2 - a**2) ** 2 * (c**2 + b**2), None, ""),
    ("II", "1.8g", "phi10.3dm.I", "0", lambda a, b, c: 2 * c * a**4, None, ""),
    ("II", "1.8g", "phi10.3dm.I", "±a", lambda a, b, c: 8 * a**4 * (a**4 - b * a**2 + c), None, ""),
    ("II", "1.8c", "phi10.3dm.II", "0", lambda a, b, c: 2 * a**4 * b**4, None, ""),
    ("II", "1.8c", "phi10.3dm.II", "±a", lambda a, b, c: 8 * a**4 * (b**2 + a**2) ** 2, None, ""),
    ("II", "1.15a", "phi10.3dm.III", "0", lambda a, b, c: 0.0, lambda a, b, c: 2 * a**4 * b**4,
     "printed 2 lam^2 a^4 b^4; V vanishes as phi^6 at 0 so V''=0"),
    ("II", "1.15a", "phi10.3dm.III", "±a", lambda a, b, c: 8 * a**8, None, ""),
    ("II", "1.80", "phi10.3dm.IV", "0", lambda a, b, c: 0.0, lambda a, b, c: 2 * a**4 * b**4,
     "printed 2 lam^2 a^4 b^4; V vanishes as phi^4 at 0 so V''=0"),
    ("II", "1.80", "phi10.3dm.IV", "±a", lambda a, b, c: 8 * a**6 * (b**2 + a**2), None, ""),
    ("II", "1.15c", "phi10.2dm.I", "±a", lambda a, b, c: 8 * a**2 * (b**2 + a**2) ** 3, None, ""),
    ("II", "1.15l", "phi10.2dm.II", "±a", lambda a, b, c: 0.0, None, ""),
    ("II", "1.15g", "phi10.2dm.III", "±a", lambda a, b, c: 0.0, None, ""),
    ("III", "3.1", "phi12.6dm.inner", "±a", lambda a, b, c: 8 * a**2 * (b**2 - a**2) ** 2 * (c**2 - a**2) ** 2, None, ""),
    ("III", "3.1", "phi12.6dm.inner", "±b", lambda a, b, c: 8 * b**2 * (b**2 - a**2) ** 2 * (c**2 - b**2) ** 2, None, ""),
    ("III", "3.1", "phi12.6dm.inner", "±c", lambda a, b, c: 8 * c**2 * (c**2 - a**2) ** 2 * (c**2 - b**2) ** 2, None, ""),
    ("III", "3.5", "phi12.5dm.I.inner", "0", lambda a, b, c: 2 * a**4 * b**4 * c**2, None, ""),
    ("III", "3.5", "phi12.5dm.I.inner", "±a", lambda a, b, c: 8 * a**4 * (b**2 - a**2) ** 2 * (c**2 + a**2), None, ""),
    ("III", "3.5", "phi12.5dm.I.inner", "±b", lambda a, b, c: 8 * b**4 * (b**2 - a**2) ** 2 * (c**2 + b**2), None, ""),
    ("III", "3.5d", "phi12.5dm.II.inner", "0", lambda a, b, c: 0.0, None, ""),
    ("III", "3.5d", "phi12.5dm.II.inner", "±a", lambda a, b, c: 8 * a**6 * (b**2 - a**2) ** 2, None, ""),
    ("III", "3.5d", "phi12.5dm.II.inner", "±b", lambda a, b, c: 8 * b**6 * (b**2 - a**2) ** 2,
     lambda a, b, c: 8 * b**6 * (b**2 - a**2) ** 4, "printed exponent 4 on (b^2-a^2); the double zero gives 2"),
    ("III", "3.9", "phi12.4dm.I.inner", "±a", lambda a, b, c: 8 * a**2 * (b**2 - a**2) ** 2 * (c**2 + a**2) ** 2, None, ""),
    ("III", "3.9", "phi12.4dm.I.inner", "±b", lambda a, b, c: 8 * b**2 * (b**2 - a**2) ** 2 * (c**2 + b**2) ** 2, None, ""),
    ("III", "3.9k", "phi12.4dm.II.inner", "±a", lambda a, b, c: 0.0, None, ""),
    ("III", "3.9k", "phi12.4dm.II.inner", "±b", lambda a, b, c: 8 * b**2 * (b**2 - a**2) ** 4, None, ""),
    ("III", "3.9d", "phi12.4dm.III.inner", "±a", lambda a, b, c: 8 * a**2 * (b**2 - a**2) ** 4, None, ""),
    ("III", "3.9d", "phi12.4dm.III.inner", "±b", lambda a, b, c: 0.0, None, ""),
    ("III", "3.11", "phi12.3dm.I", "0", lambda a, b, c: 0.0, None, ""),
    ("III", "3.11", "phi12.3dm.I", "±a", lambda a, b, c: 8 * a**10, None, ""),
    ("III", "3.13", "phi12.3dm.II", "0", lambda a, b, c: 0.0, None, ""),
    ("III", "3.13", "phi12.3dm.II", "±a", lambda a, b, c: 0.0, None, ""),
    ("III", "3.15", "phi12.3dm.III", "0", lambda a, b, c: 0.0, None, ""),
    ("III", "3.15", "phi12.3dm.III", "±a", lambda a, b, c: 8 * a**6 * (b**2 + a**2) ** 2, None, ""),
    ("III", "3.17", "phi12.3dm.IV", "0", lambda a, b, c: 2 * a**4 * b**6, None, ""),
    ("III", "3.17", "phi12.3dm.IV", "±a", lambda a, b, c: 8 * a**4 * (b**2 + a**2) ** 3, None, ""),
    ("III", "3.17r", "phi12.3dm.V", "0", lambda a, b, c: 0.0, None, ""),
    ("III", "3.17r", "phi12.3dm.V", "±a", lambda a, b, c: 8 * a**8 * (b**2 + a**2), None, ""),
    ("III", "3.19", "phi12.2dm.I", "±a", lambda a, b, c: 8 * a**2 * (b**2 + a**2) ** 4, None, ""),
    ("III", "3.23", "phi12.2dm.II", "±a", lambda a, b, c: 0.0, None, ""),
    ("III", "3.21", "phi12.2dm.III", "±a", lambda a, b, c: 0.0, None, ""),
]

_FAMILY_TABLE = {"phi8": "I", "phi10": "II", "phi12": "III"}


def phonon_table(table: str | None = None, family: str | None = None):
    """Mass-term table rows at the default case parameters, closed form vs computed.

    The +- rows are evaluated at the positive equilibrium; the potentials are even.
    """
    if family is not None:
        table = _FAMILY_TABLE[family]
    rows = []
    for tb, eq, cid, lab, closed, printed, note in _ROWS:
        if table is not None and tb != table:
            continue
        case, p = _p(cid)
        pot = case.V(p)
        phi_e = 0.0 if lab == "0" else getattr(p, lab[-1])
        lam2 = p.lam**2
        cval = lam2 * closed(p.a, p.b, p.c)
        if printed is None:
            pval = cval
        elif printed == "lam":
            pval = p.lam * closed(p.a, p.b, p.c)
        else:
            pval = lam2 * printed(p.a, p.b, p.c)
        br = branch(pot, phi_e)
        rows.append(PhononRow(tb, eq, lab, phi_e, cval, br.mass_term, pval, br.kind, note))
    return rows


def table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "potential_eq_id", "phi_e", "mass_term_closed", "mass_term_numeric", "mass_term_printed",
                "kind", "note"])
    for r in rows:
        w.writerow([r.table, r.potential_eq, r.phi_e_label, repr(r.closed), repr(r.numeric), repr(r.printed),
                    r.kind, r.note])
    return buf.getvalue()
