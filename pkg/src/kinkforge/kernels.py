"""Hot loops: potential evaluation and the adaptive BPS stepper.

Every function here is numba-compiled unless KINKFORGE_DISABLE_NUMBA is set,
in which case the same bodies run as ordinary Python.
"""
import math

import numpy as np

from ._accel import njit

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

STATUS_OK = 0
STATUS_NEGATIVE = 1
STATUS_UNDERFLOW = 2
STATUS_MAXSTEPS = 3


@njit(cache=True)
def horner(coeffs, x):
    """Evaluate sum_i coeffs[i] * x**i for every entry of x."""
    out = np.empty(x.shape[0])
    n = coeffs.shape[0]
    for k in range(x.shape[0]):
        acc = 0.0
        xk = x[k]
        for i in range(n - 1, -1, -1):
            acc = acc * xk + coeffs[i]
        out[k] = acc
    return out


@njit(cache=True)
def factored_scalar(ycoef, shifts, signs, exps, absolute, phi):
    """V/lambda^2 = P(phi^2) * prod (phi^2 + sign*r)^e at a single point."""
    y = phi * phi
    acc = 0.0
    for i in range(ycoef.shape[0] - 1, -1, -1):
        acc = acc * y + ycoef[i]
    for j in range(shifts.shape[0]):
        t = y + signs[j] * shifts[j]
        e = exps[j]
        if absolute:
            acc *= abs(t) ** e
        elif e == math.floor(e):
            p = 1.0
            for _ in range(int(e)):
                p *= t
            acc *= p
        elif t >= 0.0:
            acc *= t**e
        else:
            acc *= math.nan
    return acc


@njit(cache=True)
def factored_eval(ycoef, shifts, signs, exps, absolute, x):
    out = np.empty(x.shape[0])
    for k in range(x.shape[0]):
        out[k] = factored_scalar(ycoef, shifts, signs, exps, absolute, x[k])
    return out


@njit(cache=True)
def _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction, phi, neg_tol):
    # returns (slope, negative flag); the slope is frozen outside (lo, hi)
    if phi <= lo or phi >= hi:
        return 0.0, False
    v = lam2 * factored_scalar(ycoef, shifts, signs, exps, absolute, phi)
    if v < -neg_tol:
        return 0.0, True
    if v < 0.0:
        v = 0.0
    return direction * math.sqrt(2.0 * v), False


@njit(cache=True)
def bps_dp45(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, phi0, s_out, direction,
             rtol, atol, stop_tol, neg_tol, max_steps):
    """Integrate d(phi)/ds = direction*sqrt(2V) from phi(0)=phi0 onto s_out.

    s_out is ascending with s_out[0] == 0.  Steps are clipped so that every
    requested abscissa is hit exactly.  Integration stops once phi is within
    stop_tol of the target minimum (hi for direction>0, lo otherwise).

    Returns (phi_out, n_filled, status).
    """
    n = s_out.shape[0]
    out = np.empty(n)
    out[0] = phi0
    target = hi if direction > 0 else lo
    s = 0.0
    y = phi0
    span = s_out[n - 1] if n > 1 else 1.0
    h = 1e-3 * max(1e-6, min(1.0, span))
    k1, bad = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction, y, neg_tol)
    if bad:
        return out, 1, STATUS_NEGATIVE
    idx = 1
    steps = 0
    while idx < n:
        if abs(target - y) < stop_tol:
            return out, idx, STATUS_OK
        s_next = s_out[idx]
        hit = False
        if s + h >= s_next:
            h = s_next - s
            hit = True
        if h <= 1e-15 * max(1.0, abs(s)):
            if hit:
                out[idx] = y
                idx += 1
                h = 1e-3 * max(1e-6, abs(s))
                continue
            return out, idx, STATUS_UNDERFLOW
        steps += 1
        if steps > max_steps:
            return out, idx, STATUS_MAXSTEPS
        k2, b2 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction, y + h * _A21 * k1, neg_tol)
        k3, b3 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction,
                      y + h * (_A31 * k1 + _A32 * k2), neg_tol)
        k4, b4 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction,
                      y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3), neg_tol)
        k5, b5 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction,
                      y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4), neg_tol)
        k6, b6 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction,
                      y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5), neg_tol)
        y5 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7, b7 = _rhs(ycoef, shifts, signs, exps, absolute, lam2, lo, hi, direction, y5, neg_tol)
        if b2 or b3 or b4 or b5 or b6 or b7:
            return out, idx, STATUS_NEGATIVE
        err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        sc = atol + rtol * max(abs(y), abs(y5))
        ratio = abs(err) / sc
        if ratio <= 1.0:
            s = s_next if hit else s + h
            y = y5
            k1 = k7
            if hit:
                out[idx] = y
                idx += 1
            fac = 5.0 if ratio == 0.0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
            h = h * fac
        else:
            h = h * max(0.1, 0.9 * ratio ** -0.2)
    return out, idx, STATUS_OK
