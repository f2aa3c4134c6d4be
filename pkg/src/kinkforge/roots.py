"""Exact real-root isolation for polynomials with rational coefficients.

Polynomials are lists of Fractions, lowest degree first.  Yun's algorithm
splits off multiplicities and Sturm counts drive the bisection; brentq then
polishes each isolating interval in floating point.
"""
from fractions import Fraction

from scipy.optimize import brentq


class RootFindingFailure(RuntimeError):
    pass


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def to_fractions(coeffs):
    return _trim(Fraction(c) for c in coeffs)


def deriv(p):
    return _trim(i * p[i] for i in range(1, len(p)))


def evaluate(p, x):
    acc = Fraction(0) if isinstance(x, Fraction) else 0.0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_poly(n, d):
    n = list(n)
    d = _trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(n) - len(d) + 1, 1)
    lead = d[-1]
    while len(n) >= len(d) and n:
        k = len(n) - len(d)
        f = n[-1] / lead
        q[k] = f
        for i, c in enumerate(d):
            n[i + k] -= f * c
        n = _trim(n)
    return _trim(q), n


def _monic(p):
    return [c / p[-1] for c in p] if p else p


def gcd_poly(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return _monic(a)


def squarefree_split(p):
    """Yun's algorithm: return [(factor, multiplicity), ...] with squarefree, coprime factors."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    dp = deriv(p)
    a = gcd_poly(p, dp)
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(dp, a)
    d = _trim(x - y for x, y in _zip_pad(c, deriv(b)))
    out = []
    i = 1
    while len(b) > 1:
        a = gcd_poly(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = divmod_poly(b, a)
        c, _ = divmod_poly(d, a)
        d = _trim(x - y for x, y in _zip_pad(c, deriv(b)))
        i += 1
    return out


def _zip_pad(p, q):
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return zip(p, q)


def sturm_sequence(p):
    seq = [_trim(p), deriv(p)]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x):
    signs = []
    for s in seq:
        v = evaluate(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(seq, lo, hi):
    """Number of distinct real roots in (lo, hi]."""
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def cauchy_bound(p):
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate(p, lo=None, hi=None, max_depth=200):
    """Disjoint intervals (l, r], each holding exactly one root of squarefree p."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    if lo is None or hi is None:
        r = cauchy_bound(p)
        lo = -r if lo is None else lo
        hi = r if hi is None else hi
    seq = sturm_sequence(p)
    out = []
    stack = [(Fraction(lo), Fraction(hi), 0)]
    while stack:
        l, r, depth = stack.pop()
        n = count_roots(seq, l, r)
        if n == 0:
            continue
        if n == 1:
            out.append((l, r))
            continue
        if depth > max_depth:
            raise RootFindingFailure("real-root isolation did not converge")
        m = (l + r) / 2
        stack.append((l, m, depth + 1))
        stack.append((m, r, depth + 1))
    out.sort()
    return out


def _bisect_exact(factor, l, r):
    fl = evaluate(factor, l) > 0
    while float(l) != float(r):
        m = (l + r) / 2
        fm = evaluate(factor, m)
        if fm == 0:
            return float(m)
        if (fm > 0) == fl:
            l = m
        else:
            r = m
    return float(l)


def real_roots(p, lo=None, hi=None):
    """All distinct real roots of p in (lo, hi] with multiplicities, sorted.

    Returns a list of (float root, multiplicity).
    """
    p = _trim(p)
    roots = []
    for factor, mult in squarefree_split(p):
        ff = [float(c) for c in factor]
        seq = sturm_sequence(factor)
        for l, r in isolate(factor, lo, hi):
            # the open end may sit exactly on a neighbouring root
            while evaluate(factor, l) == 0 and evaluate(factor, r) != 0:
                m = (l + r) / 2
                if count_roots(seq, m, r) == 1:
                    l = m
                else:
                    r = m
            if evaluate(factor, r) == 0:
                roots.append((float(r), mult))
                continue
            try:
                x = brentq(lambda t: evaluate(ff, t), float(l), float(r), xtol=1e-300, rtol=1e-15, maxiter=500)
            except ValueError:
                # float rounding hid the sign change; finish exactly
                x = _bisect_exact(factor, l, r)
            roots.append((x, mult))
    roots.sort()
    return roots
