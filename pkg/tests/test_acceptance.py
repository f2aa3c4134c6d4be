"""One pass/fail line per acceptance criterion; tolerances are the contract's."""
import math
import time

import numpy as np
import pytest

from kinkforge import catalog, limits, qes
from kinkforge.numeric import quadrature_energy
from kinkforge.phonons import mass_term, phonon_table
from kinkforge.potential import (
    classify_critical_points,
    phi8_scan_template,
    phi10_scan_template,
    phi10_alpha_map,
    phi10_constraint_scale,
    phi10_four_degenerate_constraint,
    scan_phase,
)
from kinkforge.verify import check_tails, profile_gap

CASES = catalog.list_cases()


def test_c1_energy_oracle(report):
    t0 = time.perf_counter()
    worst, worst_id = 0.0, None
    for case in CASES:
        p = case.params()
        lo, hi = case.minima(p)
        ec = catalog.closed_form_energy(case, p)
        eq = quadrature_energy(case.V(p), lo, hi)
        rel = abs(ec - eq) / abs(eq)
        if rel > worst:
            worst, worst_id = rel, case.id
    dt = time.perf_counter() - t0
    ok = len(CASES) == 38 and worst <= 1e-8 and dt < 10.0
    report("1", ok, f"{len(CASES)} cases, worst relative energy gap {worst:.2e} ({worst_id}) <= 1e-8, {dt:.2f}s < 10s")
    assert ok


def test_c2_implicit_vs_ode(report):
    t0 = time.perf_counter()
    gaps = {case.id: profile_gap(case, case.params()) for case in CASES}
    dt = time.perf_counter() - t0
    wid = max(gaps, key=gaps.get)
    ok = max(gaps.values()) <= 1e-6 and dt < 30.0
    report("2", ok, f"worst sup-norm gap {gaps[wid]:.2e} x width ({wid}) <= 1e-6, {dt:.2f}s < 30s")
    assert ok


def test_c3_tail_classification(report):
    n = bad = 0
    worst_rate = worst_exp = 0.0
    failures = []
    for case in CASES:
        for chk in check_tails(case, case.params()):
            n += 1
            if chk.rate_rel is not None:
                worst_rate = max(worst_rate, chk.rate_rel)
            if chk.exponent_rel is not None:
                worst_exp = max(worst_exp, chk.exponent_rel)
            if not chk.ok:
                bad += 1
                failures.append(f"{case.id}:{chk.side}")
    ok = n == 76 and bad == 0
    report("3", ok, f"{n - bad}/{n} tails classified; worst rate error {worst_rate:.1e} (<= 1%), "
                    f"worst exponent error {worst_exp:.1e} (<= 2%){'; failing ' + ','.join(failures) if failures else ''}")
    assert ok


def test_c4_crossovers(report):
    pairs = [
        ("phi8.4dm.inner", "phi8.4dm.outer", 2 / (3 - math.sqrt(5)), "phi8"),
        ("phi10.5dm.inner", "phi10.5dm.outer", math.sqrt(3), "phi10 5DM"),
        ("phi12.5dm.II.inner", "phi12.5dm.II.outer", math.sqrt(7 / 3), "phi12 5DM-II"),
    ]
    parts, ok = [], True
    for a, b, target, name in pairs:
        r = catalog.energy_crossover(a, b)
        err = abs(r - target)
        ok &= err <= 1e-6
        parts.append(f"{name} b/a={r:.10f} (err {err:.1e})")
    report("4", ok, "; ".join(parts) + " [tol 1e-6]")
    assert ok


def test_c5_phonons(report):
    rows = phonon_table()
    nz_worst, zero_bad = 0.0, 0
    for r in rows:
        if r.closed == 0.0:
            zero_bad += r.numeric != 0.0
        else:
            nz_worst = max(nz_worst, abs(r.numeric - r.closed) / abs(r.closed))
    tail_worst, ntails = 0.0, 0
    for case in CASES:
        p = case.params()
        for side in ("minus", "plus"):
            t = catalog.tail(case, side, p)
            if t.kind != "exponential":
                continue
            m2 = mass_term(case.V(p), t.approach_value)
            tail_worst = max(tail_worst, abs(t.rate**2 - m2) / m2)
            ntails += 1
    ok = nz_worst <= 1e-10 and zero_bad == 0 and tail_worst <= 1e-8
    report("5", ok, f"{len(rows)} table rows, worst relative V'' error {nz_worst:.1e} (<= 1e-10), "
                    f"{zero_bad} inexact zero rows; {ntails} exponential tails, worst |rate^2 - V''|/V'' {tail_worst:.1e} (<= 1e-8)")
    assert ok


def _locs(points):
    return sorted(p.location for p in points)


def test_c6a_phi8_scan(report):
    grid = [0, 0.5, 1, 1.5, 2, 2.5]
    res = dict(zip(grid, scan_phase(phi8_scan_template(), "alpha2", grid)))
    a, b = (math.sqrt(3) - 1) / 2, (math.sqrt(3) + 1) / 2
    deg = _locs(res[1].degenerate_minima)
    ok4 = len(deg) == 4 and np.allclose(deg, [-b, -a, a, b], rtol=0, atol=1e-9)
    infl = _locs(res[0].inflections)
    r = math.sqrt(1.5)
    ok0 = len(infl) == 2 and np.allclose(infl, [-r, r], rtol=0, atol=1e-9)
    ok = ok4 and ok0 and len(res) == 6
    report("6a", ok, f"phi8 scan, 6 rows; alpha2=1 degenerate minima {['%.9f' % d for d in deg]}; "
                     f"alpha2=0 inflections {['%.9f' % d for d in infl]} [tol 1e-9]")
    assert ok


def test_c6b_phi10_scan_at_2_2(report):
    cps = classify_critical_points(phi10_scan_template().with_alpha("alpha2", 2.2).to_polynomial())
    deg = _locs(cps.degenerate_minima)
    mins = {round(c.location, 6): c.value for c in cps.minima}
    ok = len(deg) == 3 and np.allclose(deg, [-1, 0, 1], atol=1e-9)
    report("6b", ok, f"phi10 scan at alpha2=2.2: degenerate minima {deg}, minima (location: V) {mins}; "
                     "expected degenerate minima at 0, +-1")
    assert ok


def test_c7_qes(report):
    rng = np.random.default_rng(20240607)
    worst_res, n_states, neg_bad, pos_draws, norm_worst = 0.0, 0, 0, 0, 0.0
    for _ in range(100):
        B, C = rng.uniform(-2, 2, size=2)
        lam = rng.uniform(0.3, 2.0)
        states = [qes.make_state0(B, C, lam)] + qes.make_state1(B, C, lam)
        try:
            states += qes.make_state2(B, C, lam)
        except qes.NoRealSolution:
            pass
        if B > 0 and C > 0:
            pos_draws += 1
            roots = np.roots(qes.cubic_coeffs(B, C, lam)[::-1])
            real = roots[np.abs(roots.imag) <= 1e-9 * np.abs(roots)].real
            neg_bad += int(np.any(real >= 0))
        for s in states:
            n_states += 1
            worst_res = max(worst_res, qes.schrodinger_residual(s))
            Phi = qes.cutoff(s)
            g = np.linspace(-Phi, Phi, 40001)
            from scipy.integrate import simpson

            norm_worst = max(norm_worst, abs(simpson(qes.pdf(s, g), x=g) - 1.0))
    B, C, lam = 0.7, 1.3, 0.9
    s0, s1, s2 = qes.make_state0(B, C, lam), qes.make_state1(B, C, lam)[0], qes.make_state2(B, C, lam)[0]
    prog = [(s.alphas[2] * 2 * lam * lam - 2 * B * C) / (math.sqrt(2) * lam) for s in (s0, s1, s2)]
    prog_ok = np.allclose(prog, [5, 9, 13], rtol=1e-12)
    ok = worst_res <= 1e-10 and neg_bad == 0 and norm_worst <= 1e-8 and prog_ok
    report("7", ok, f"{n_states} states over 100 draws, worst residual {worst_res:.1e} (<= 1e-10); "
                    f"{pos_draws} draws with B,C>0, {neg_bad} with a non-negative cubic root; "
                    f"worst |int pdf - 1| {norm_worst:.1e} (<= 1e-8); alpha4 progression {['%.12g' % v for v in prog]} x sqrt2")
    assert ok


def test_c8_sine_gordon(report):
    gaps = [limits.convergence_metric("odd", n) for n in range(1, 5)]
    dec = all(b < a for a, b in zip(gaps, gaps[1:]))
    rng = np.random.default_rng(8)
    x = rng.uniform(-10, 10, 1000)
    eq = limits.equivalence_gap(x)
    far = np.array([-60.0, 60.0])
    odd, even = limits.limit_kink("odd", 1.0, far), limits.limit_kink("even", 1.0, far)
    asym = np.allclose(odd, [0, 2 * math.pi], atol=1e-12) and np.allclose(even, [-math.pi, math.pi], atol=1e-12)
    ok = dec and eq <= 1e-12 and asym
    report("8", ok, f"odd-parity gaps n=1..4 {['%.3g' % g for g in gaps]} strictly decreasing={dec}; "
                    f"equivalence identity max {eq:.1e} (<= 1e-12); asymptotes odd {odd.tolist()} even {even.tolist()}")
    assert ok


def _phi10_draws(n=1000, seed=9):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        a, b, c = rng.uniform(0.1, 2.0, size=3)
        if b < a:
            a, b = b, a
        d = phi10_alpha_map(a, b, c)
        out.append((d["alpha8"], d["alpha6"], d["alpha4"], d["alpha2"]))
    return out


def test_c9a_phi10_constraint_residual(report):
    worst = max(abs(phi10_four_degenerate_constraint(*al)) / phi10_constraint_scale(*al) for al in _phi10_draws())
    ok = worst <= 1e-9
    report("9a", ok, f"1000 images, worst |residual|/scale {worst:.1e} (<= 1e-9)")
    assert ok


def test_c9b_phi10_constraint_detects_perturbation(report):
    ratios = []
    for a8, a6, a4, a2 in _phi10_draws():
        scale = phi10_constraint_scale(a8, a6, a4, a2)
        ratios.append(abs(phi10_four_degenerate_constraint(a8, a6, a4, 1.1 * a2)) / scale)
    ratios = np.array(ratios)
    miss = int(np.sum(ratios <= 1e-3))
    ok = miss == 0
    report("9b", ok, f"10% alpha2 perturbation: {1000 - miss}/1000 exceed 1e-3 x scale (smallest {ratios.min():.1e})")
    assert ok
