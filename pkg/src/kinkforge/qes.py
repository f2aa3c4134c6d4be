"""Quasi-exactly solvable phi^10 states.

psi = P(phi^2) * exp(W),  W = -lam phi^6/(3 sqrt2) + B phi^4/4 - C phi^2/2,
with P = 1, phi^2 + D, phi^4 + D phi^2 + J for levels 0, 1, 2.  Each level
fixes the alpha map of V = lam^2 (phi^10 - a8 phi^8 + a6 phi^6 - a4 phi^4 + a2 phi^2).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad

from .potential import AlphaForm

__all__ = [
    "QESError",
    "NoRealSolution",
    "NotGroundState",
    "QESState",
    "make_state0",
    "make_state1",
    "make_state2",
    "cubic_coeffs",
    "dj_relations",
    "dj_resultant",
    "schrodinger_residual",
    "cutoff",
    "pdf",
    "normalization",
    "free_energy",
    "state2_H",
]

SQ2 = math.sqrt(2.0)


class QESError(ValueError):
    pass


class NoRealSolution(QESError):
    pass


class NotGroundState(QESError):
    pass


@dataclass(frozen=True)
class QESState:
    level: int
    B: float
    C: float
    lam: float
    D: float | None = None
    J: float | None = None
    E: float = 0.0
    F: float | None = None
    G: float | None = None
    H: float | None = None
    alphas: tuple = ()  # (a8, a6, a4, a2, a0)

    @property
    def prefactor(self) -> np.ndarray:
        """P as coefficients in phi (lowest first)."""
        if self.level == 0:
            return np.array([1.0])
        if self.level == 1:
            return np.array([self.D, 0.0, 1.0])
        return np.array([self.J, 0.0, self.D, 0.0, 1.0])

    @property
    def exponent(self) -> np.ndarray:
        """W as coefficients in phi (lowest first)."""
        w = np.zeros(7)
        w[2] = -self.C / 2
        w[4] = self.B / 4
        w[6] = -self.lam / (3 * SQ2)
        return w

    def alpha_form(self) -> AlphaForm:
        a8, a6, a4, a2, a0 = self.alphas
        return AlphaForm("phi10", {"alpha8": a8, "alpha6": a6, "alpha4": a4, "alpha2": a2, "alpha0": a0})

    def potential_coeffs(self) -> np.ndarray:
        """V/lam^2 in natural signs, lowest first."""
        a8, a6, a4, a2, a0 = self.alphas
        return np.array([-a0, 0, a2, 0, -a4, 0, a6, 0, -a8, 0, 1.0])

    def log_psi(self, phi):
        phi = np.asarray(phi, dtype=float)
        with np.errstate(divide="ignore"):
            return P.polyval(phi, self.exponent) + np.log(np.abs(P.polyval(phi, self.prefactor)))

    def psi(self, phi):
        phi = np.asarray(phi, dtype=float)
        return P.polyval(phi, self.prefactor) * np.exp(P.polyval(phi, self.exponent))

    def nodes(self) -> int:
        """Number of real zeros of psi."""
        if self.level == 0:
            return 0
        r = np.roots(self.prefactor[::-1])
        real = r[np.abs(r.imag) <= 1e-12 * np.maximum(1.0, np.abs(r))].real
        return len(set(np.round(real, 12)))

    def to_dict(self) -> dict:
        return {"level": self.level, "B": self.B, "C": self.C, "D": self.D, "J": self.J, "lambda": self.lam,
                "E": self.E, "alphas": dict(zip(("alpha8", "alpha6", "alpha4", "alpha2", "alpha0"), self.alphas))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _common(B, C, lam):
    if not lam > 0:
        raise QESError("lambda must be positive")
    a8 = SQ2 * B / lam
    a6 = (B * B + 2 * SQ2 * C * lam) / (2 * lam * lam)
    return a8, a6


def make_state0(B: float, C: float, lam: float = 1.0) -> QESState:
    a8, a6 = _common(B, C, lam)
    a4 = (2 * B * C + 5 * SQ2 * lam) / (2 * lam * lam)
    a2 = (C * C + 3 * B) / (2 * lam * lam)
    return QESState(0, B, C, lam, E=C / 2, alphas=(a8, a6, a4, a2, 0.0))


def cubic_coeffs(B, C, lam):
    """2 sqrt2 lam D^3 + 2B D^2 + 2C D + 1, highest degree first."""
    return np.array([2 * SQ2 * lam, 2 * B, 2 * C, 1.0])


def _polish_root(coeffs, x):
    d = np.polyder(coeffs)
    for _ in range(8):
        fx, dx = np.polyval(coeffs, x), np.polyval(d, x)
        if dx == 0:
            break
        step = fx / dx
        x -= step
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def _real_roots(coeffs, rel=1e-7):
    r = np.roots(coeffs)
    out = []
    for z in r:
        if abs(z.imag) <= rel * max(1.0, abs(z)):
            out.append(_polish_root(coeffs, float(z.real)))
    return sorted(out)


def make_state1(B: float, C: float, lam: float = 1.0):
    """One state per real root D of the cubic."""
    a8, a6 = _common(B, C, lam)
    a4 = (2 * B * C + 9 * SQ2 * lam) / (2 * lam * lam)
    states = []
    for D in _real_roots(cubic_coeffs(B, C, lam)):
        F = 2.0 / D
        G = -2.0 * (1 + 2 * C * D) / D**2
        a2 = (C * C + 3 * B + G) / (2 * lam * lam)
        states.append(QESState(1, B, C, lam, D=D, E=(C - F) / 2, F=F, G=G, alphas=(a8, a6, a4, a2, 0.0)))
    return states


def dj_relations(D, J, B, C, lam):
    """The two D-J conditions as printed (both must vanish)."""
    r1 = D * D + 2 * (J * C + SQ2 * lam * J * J) * D + 2 * J * (2 * B * J - 3)
    r2 = D**3 + 2 * C * J * D * D + (2 * B * J - 7) * D * J + 4 * J * J * (SQ2 * lam * J - C)
    return r1, r2


def _dj_scale(D, J, B, C, lam):
    terms1 = [D * D, 2 * J * C * D, 2 * SQ2 * lam * J * J * D, 4 * B * J * J, 6 * J]
    terms2 = [D**3, 2 * C * J * D * D, 2 * B * J * J * D, 7 * D * J, 4 * SQ2 * lam * J**3, 4 * C * J * J]
    return max(1.0, max(abs(t) for t in terms1)), max(1.0, max(abs(t) for t in terms2))


def _q_pair(B, C, lam):
    # q1 = A1 J^2 + B1 J + C1 and q2 = A2 J^2 + B2 J + C2, coefficients in D (lowest first).
    # q1 is the first printed relation; the second printed relation equals D*q1 - J*q2.
    A1 = np.array([4 * B, 2 * SQ2 * lam])
    B1 = np.array([-6.0, 2 * C])
    C1 = np.array([0.0, 0.0, 1.0])
    A2 = np.array([-4 * SQ2 * lam])
    B2 = np.array([4 * C, 2 * B, 2 * SQ2 * lam])
    C2 = np.array([0.0, 1.0])
    return A1, B1, C1, A2, B2, C2


def dj_resultant(B, C, lam):
    """Resultant in J of the two quadratics; a polynomial in D (lowest first)."""
    A1, B1, C1, A2, B2, C2 = _q_pair(B, C, lam)
    u = P.polysub(P.polymul(A1, C2), P.polymul(A2, C1))
    v = P.polysub(P.polymul(A1, B2), P.polymul(A2, B1))
    w = P.polysub(P.polymul(B1, C2), P.polymul(B2, C1))
    return P.polysub(P.polymul(u, u), P.polymul(v, w))


def _newton_dj(D, J, B, C, lam, iters=30):
    for _ in range(iters):
        r1, r2 = dj_relations(D, J, B, C, lam)
        j11 = 2 * D + 2 * (J * C + SQ2 * lam * J * J)
        j12 = 2 * (C + 2 * SQ2 * lam * J) * D + 8 * B * J - 6
        j21 = 3 * D * D + 4 * C * J * D + (2 * B * J - 7) * J
        j22 = 2 * C * D * D + (4 * B * J - 7) * D + 12 * SQ2 * lam * J * J - 8 * C * J
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        dD = (r1 * j22 - r2 * j12) / det
        dJ = (j11 * r2 - j21 * r1) / det
        D, J = D - dD, J - dJ
        if abs(dD) <= 1e-16 * max(1.0, abs(D)) and abs(dJ) <= 1e-16 * max(1.0, abs(J)):
            break
    return D, J


def state2_H(D, J, C, printed: bool = False):
    """H = (6/D - 2C - G/2) G with G = 2D/J; printed=True uses the printed 2D in place of 2C."""
    G = 2 * D / J
    return (6 / D - (2 * D if printed else 2 * C) - G / 2) * G


def make_state2(B: float, C: float, lam: float = 1.0, tol: float = 1e-12):
    a8, a6 = _common(B, C, lam)
    a4 = (2 * B * C + 13 * SQ2 * lam) / (2 * lam * lam)
    res = dj_resultant(B, C, lam)
    A1, B1, C1, A2, B2, C2 = _q_pair(B, C, lam)
    found = []
    for z in np.roots(res[::-1]):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        D = float(z.real)
        if abs(D) < 1e-12:
            continue
        num = P.polyval(D, P.polysub(P.polymul(A1, C2), P.polymul(A2, C1)))
        den = P.polyval(D, P.polysub(P.polymul(A2, B1), P.polymul(A1, B2)))
        if den == 0:
            continue
        J = num / den
        D, J = _newton_dj(D, J, B, C, lam)
        if abs(J) < 1e-12 or abs(D) < 1e-12:
            continue
        r1, r2 = dj_relations(D, J, B, C, lam)
        s1, s2 = _dj_scale(D, J, B, C, lam)
        if abs(r1) > tol * s1 or abs(r2) > tol * s2:
            continue
        if any(abs(D - d) <= 1e-9 * max(1, abs(d)) and abs(J - j) <= 1e-9 * max(1, abs(j)) for d, j in found):
            continue
        found.append((D, J))
    if not found:
        raise NoRealSolution(f"no real (D, J) for B={B}, C={C}, lam={lam}")
    states = []
    for D, J in sorted(found):
        G = 2 * D / J
        H = state2_H(D, J, C)
        a2 = (C * C + 3 * B + H) / (2 * lam * lam)
        states.append(QESState(2, B, C, lam, D=D, J=J, E=(C - G) / 2, G=G, H=H, alphas=(a8, a6, a4, a2, 0.0)))
    return states


def cutoff(state: QESState, mass: float = 1e-14) -> float:
    """Phi such that psi^2 outside [-Phi, Phi] carries relative mass below the threshold."""
    grid = np.linspace(0.0, 50.0, 50001)
    lp = 2 * state.log_psi(grid)
    peak = np.max(lp[np.isfinite(lp)])
    # beyond the last point above threshold psi^2 decays at least like exp(-phi^6)
    above = np.nonzero(lp - peak > math.log(mass) - 10)[0]
    return float(grid[above[-1] + 1]) if above.size else float(grid[1])


def _scaled_psi2(state, phi, shift):
    return np.exp(2 * state.log_psi(phi) - shift)


def normalization(state: QESState):
    """(Phi, log of int psi^2) with the integral taken over [-Phi, Phi]."""
    Phi = cutoff(state)
    g = np.linspace(0, Phi, 4001)
    shift = float(np.max(2 * state.log_psi(g)[np.isfinite(state.log_psi(g))]))
    pts = list(np.linspace(0, Phi, 9)[1:-1])
    half, _ = quad(lambda t: float(_scaled_psi2(state, t, shift)), 0.0, Phi, points=pts, limit=400,
                   epsabs=0.0, epsrel=1e-13)
    return Phi, math.log(2 * half) + shift


def pdf(state: QESState, grid):
    """psi^2 / int psi^2 on the grid."""
    _, logZ = normalization(state)
    return np.exp(2 * state.log_psi(np.asarray(grid, dtype=float)) - logZ)


def schrodinger_residual(state: QESState, grid=None, npts: int = 2001) -> float:
    """max |-psi'' + 2V psi - 2E psi| / max |2V psi| over the grid, psi'' exact."""
    if grid is None:
        Phi = cutoff(state)
        grid = np.linspace(-Phi, Phi, npts)
    grid = np.asarray(grid, dtype=float)
    p, w = state.prefactor, state.exponent
    dp, d2p = P.polyder(p), P.polyder(p, 2)
    dw, d2w = P.polyder(w), P.polyder(w, 2)
    v = state.lam**2 * state.potential_coeffs()
    # psi'' e^{-W} = P'' + 2 P' W' + P (W'' + W'^2)
    lap = P.polyadd(P.polyadd(d2p, 2 * P.polymul(dp, dw)), P.polymul(p, P.polyadd(d2w, P.polymul(dw, dw))))
    r = P.polysub(P.polymul(2 * v, p), lap)
    r = P.polysub(r, 2 * state.E * p)
    wv = P.polyval(grid, w)
    e = np.exp(wv - np.max(wv))
    num = np.abs(P.polyval(grid, r)) * e
    den = np.abs(P.polyval(grid, P.polymul(2 * v, p))) * e
    return float(np.max(num) / np.max(den))


def free_energy(state: QESState, siblings=()) -> float:
    """E of the state, provided it is a ground state.

    A state with real nodes cannot be a ground state; nor can one whose
    potential coincides with a sibling of lower energy.
    """
    if state.nodes() > 0:
        raise NotGroundState(f"level-{state.level} state has {state.nodes()} real node(s)")
    for s in siblings:
        if s is state:
            continue
        if np.allclose(s.alphas, state.alphas, rtol=1e-10, atol=1e-12) and s.E < state.E:
            raise NotGroundState(f"a sibling with the same potential has lower energy {s.E}")
    return state.E


def states_csv(states) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "B", "C", "D", "J", "lambda", "E", "alpha8", "alpha6", "alpha4", "alpha2", "alpha0", "nodes"])
    r = lambda v: "" if v is None else repr(float(v))
    for s in states:
        w.writerow([s.level, r(s.B), r(s.C), r(s.D), r(s.J), r(s.lam), r(s.E), *[r(a) for a in s.alphas], s.nodes()])
    return buf.getvalue()
